#pragma once

#include "rode/error.hpp"
#include "rode/gaussian_rational.hpp"
#include "rode/poly.hpp"
#include "rode/ratfunc.hpp"
#include "rode/matrix.hpp"
#include "rode/linsolve.hpp"
#include "rode/roots.hpp"
#include "rode/laurent.hpp"
#include "rode/diffop.hpp"
#include "rode/ratsolve.hpp"
#include "rode/triangular.hpp"
#include "rode/expr.hpp"
#include "rode/regge_wheeler.hpp"
