// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "moa/dense_array.hpp"
#include "moa/dyadics.hpp"
#include "moa/error.hpp"
#include "moa/expr.hpp"
#include "moa/instrumentation.hpp"
#include "moa/kronecker.hpp"
#include "moa/onf.hpp"
#include "moa/parser.hpp"
#include "moa/permute.hpp"
#include "moa/shape.hpp"
