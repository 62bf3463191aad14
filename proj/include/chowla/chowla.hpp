// Umbrella header.
#pragma once

#include "chowla/arith.hpp"
#include "chowla/characters.hpp"
#include "chowla/decomposition.hpp"
#include "chowla/exceptions.hpp"
#include "chowla/int128.hpp"
#include "chowla/liouville.hpp"
#include "chowla/parallel.hpp"
#include "chowla/poly.hpp"
#include "chowla/proxy.hpp"
#include "chowla/sieve_weights.hpp"
#include "chowla/version.hpp"
