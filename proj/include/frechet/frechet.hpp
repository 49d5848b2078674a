#pragma once

#include "frechet/calculus.hpp"
#include "frechet/errors.hpp"
#include "frechet/expr.hpp"
#include "frechet/fields.hpp"
#include "frechet/generators.hpp"
#include "frechet/linalg.hpp"
#include "frechet/multilinear.hpp"
#include "frechet/padic.hpp"
#include "frechet/parser.hpp"
#include "frechet/partitions.hpp"
#include "frechet/rational.hpp"
#include "frechet/serialize.hpp"
#include "frechet/taylor.hpp"
#include "frechet/vectorfields.hpp"
#include "frechet/verify.hpp"
