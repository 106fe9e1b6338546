#pragma once

#include "qcsym/algebra.hpp"
#include "qcsym/conformal.hpp"
#include "qcsym/io.hpp"
#include "qcsym/quasilattice.hpp"
#include "qcsym/symmetry.hpp"
#include "qcsym/tiling.hpp"
