#pragma once

#include "qcsym/generators.hpp"
#include "qcsym/mobius.hpp"
#include "qcsym/quadratic.hpp"
