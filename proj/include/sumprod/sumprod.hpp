#pragma once

#include "sumprod/error.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/field.hpp"
#include "sumprod/polynomial.hpp"
#include "sumprod/families.hpp"
#include "sumprod/decomposer.hpp"
#include "sumprod/oracle.hpp"
#include "sumprod/io.hpp"
