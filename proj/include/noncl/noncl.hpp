#pragma once

#include "noncl/analytic.hpp"
#include "noncl/checks.hpp"
#include "noncl/errors.hpp"
#include "noncl/fock.hpp"
#include "noncl/io.hpp"
#include "noncl/measures.hpp"
#include "noncl/roof.hpp"
#include "noncl/sweep.hpp"
