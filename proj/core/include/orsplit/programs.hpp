#pragma once

#include "orsplit/program.hpp"

namespace orsplit {

// N-queens, placed column by column; the board is analyzed at every step
// so only safe rows are offered. 4 <= n <= 13.
SearchProgram gen_queens(int n);

// Naive sort of the inverted list [n, n-1, ..., 1]: nondeterministically
// permute, test sortedness only on complete permutations. 3 <= n <= 12.
SearchProgram gen_nsort(int n);

// All Hamiltonian cycles from vertex 0 of the cubic circulant graph on n
// vertices (ring edges plus diameter chords); every vertex has degree 3.
// n must be even and >= 4; each undirected cycle is found in both
// directions.
SearchProgram gen_ham(int n);

// Blank-square maze on a 4x4 grid: all move sequences of exactly n steps
// taking the blank from `start` to `goal`. Cells are indexed row-major.
SearchProgram gen_maze(int n, int start = 0, int goal = 15);

}  // namespace orsplit
