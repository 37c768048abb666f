#pragma once

#include "pftl/arith.hpp"
#include "pftl/bounds.hpp"
#include "pftl/commands.hpp"
#include "pftl/element.hpp"
#include "pftl/errors.hpp"
#include "pftl/enumerate.hpp"
#include "pftl/height.hpp"
#include "pftl/interval.hpp"
#include "pftl/primes.hpp"
#include "pftl/purefield.hpp"
#include "pftl/roots.hpp"
#include "pftl/text.hpp"
