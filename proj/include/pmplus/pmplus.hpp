#pragma once

#include "error.hpp"
#include "key_schedule.hpp"
#include "keygen.hpp"
#include "mix.hpp"
#include "multilinear.hpp"
#include "params.hpp"
#include "tree_hasher.hpp"
#include "wide_arith.hpp"
