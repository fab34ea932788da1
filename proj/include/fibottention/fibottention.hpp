#pragma once

// Umbrella header: sparse-attention mask generation from Wythoff-array
// Fibonacci dilation sequences, baseline sparse patterns, a reference
// masked multi-head attention with gradients, and the analysis layer
// (sparsity bounds, dot-product projections, head diversity).

#include "fibottention/golden.hpp"
#include "fibottention/prng.hpp"
#include "fibottention/sequence.hpp"
#include "fibottention/support.hpp"
#include "fibottention/maskgen.hpp"
#include "fibottention/matrix.hpp"
#include "fibottention/attention.hpp"
#include "fibottention/analysis.hpp"
#include "fibottention/io.hpp"
