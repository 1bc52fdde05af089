#pragma once

#include "galois/cohomology.hpp"
#include "galois/extension.hpp"
#include "galois/format.hpp"
#include "galois/galois.hpp"
#include "galois/group.hpp"
#include "galois/kummer.hpp"
#include "galois/modules.hpp"
#include "galois/report.hpp"
#include "galois/ring_parse.hpp"
#include "galois/units.hpp"
