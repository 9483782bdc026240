#include "orsplit/programs.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace orsplit {

SearchProgram gen_queens(int n) {
  if (n < 4 || n > 13) throw std::invalid_argument("queens: n must be in [4, 13]");
  SearchProgram p;
  p.name = "queens(" + std::to_string(n) + ")";
  p.initial_store.cells.assign((size_t)n, -1);
  p.initial_store.top_mark = 0;

  auto first_open = [n](const Store& s) {
    int col = 0;
    while (col < n && s.cells[(size_t)col] >= 0) ++col;
    return col;
  };
  auto safe = [n](const Store& s, int col, int row) {
    for (int c = 0; c < col; ++c) {
      int64_t r = s.cells[(size_t)c];
      if (r == row || std::abs((int)(r - row)) == col - c) return false;
    }
    return true;
  };

  p.expand = [n, first_open, safe](const Store& s) {
    int col = first_open(s);
    if (col == n) return Expansion::solution();
    std::vector<Alternative> alts;
    for (int row = 0; row < n; ++row)
      if (safe(s, col, row)) alts.push_back({row});
    if (alts.empty()) return Expansion::fail();
    return Expansion::choice(std::move(alts));
  };
  p.apply = [first_open](Store& s, Trail& trail, Alternative alt) {
    trailed_write(s, trail, (size_t)first_open(s), alt.code);
    return true;
  };
  return p;
}

SearchProgram gen_nsort(int n) {
  if (n < 3 || n > 12) throw std::invalid_argument("nsort: n must be in [3, 12]");
  SearchProgram p;
  p.name = "nsort(" + std::to_string(n) + ")";
  // cell 0: elements placed; cells [1, n]: output; [n+1, 2n]: used flags.
  p.initial_store.cells.assign((size_t)(2 * n + 1), 0);
  p.initial_store.top_mark = 0;

  p.expand = [n](const Store& s) {
    int placed = (int)s.cells[0];
    if (placed == n) {
      for (int i = 1; i < n; ++i)
        if (s.cells[(size_t)i] > s.cells[(size_t)i + 1]) return Expansion::fail();
      return Expansion::solution();
    }
    std::vector<Alternative> alts;
    for (int i = 0; i < n; ++i)
      if (s.cells[(size_t)(n + 1 + i)] == 0) alts.push_back({i});
    return Expansion::choice(std::move(alts));
  };
  p.apply = [n](Store& s, Trail& trail, Alternative alt) {
    int placed = (int)s.cells[0];
    int i = (int)alt.code;
    trailed_write(s, trail, 0, placed + 1);
    trailed_write(s, trail, (size_t)(1 + placed), n - i);  // inverted input
    trailed_write(s, trail, (size_t)(n + 1 + i), 1);
    return true;
  };
  return p;
}

SearchProgram gen_ham(int n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("ham: n must be even and >= 4");
  SearchProgram p;
  p.name = "ham(" + std::to_string(n) + ")";
  // cell 0: path length; cells [1, n]: path; [n+1, 2n]: visited flags.
  p.initial_store.cells.assign((size_t)(2 * n + 1), 0);
  p.initial_store.cells[0] = 1;      // the path starts at vertex 0
  p.initial_store.cells[(size_t)(n + 1)] = 1;
  p.initial_store.top_mark = (size_t)(2 * n + 1);

  auto neighbors = [n](int v) {
    int a = (v + 1) % n, b = (v + n - 1) % n, c = (v + n / 2) % n;
    std::vector<int> out{a, b, c};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  p.expand = [n, neighbors](const Store& s) {
    int len = (int)s.cells[0];
    int cur = (int)s.cells[(size_t)len];  // path slot of the last vertex
    if (len == n) {
      for (int v : neighbors(cur))
        if (v == 0) return Expansion::solution();
      return Expansion::fail();
    }
    std::vector<Alternative> alts;
    for (int v : neighbors(cur))
      if (s.cells[(size_t)(n + 1 + v)] == 0) alts.push_back({v});
    if (alts.empty()) return Expansion::fail();
    return Expansion::choice(std::move(alts));
  };
  p.apply = [n](Store& s, Trail& trail, Alternative alt) {
    int len = (int)s.cells[0];
    int v = (int)alt.code;
    trailed_write(s, trail, 0, len + 1);
    trailed_write(s, trail, (size_t)(len + 1), v);
    trailed_write(s, trail, (size_t)(n + 1 + v), 1);
    return true;
  };
  return p;
}

SearchProgram gen_maze(int n, int start, int goal) {
  if (n < 0) throw std::invalid_argument("maze: n must be >= 0");
  if (start < 0 || start > 15 || goal < 0 || goal > 15)
    throw std::invalid_argument("maze: start/goal must be grid cells 0..15");
  SearchProgram p;
  p.name = "maze(" + std::to_string(n) + ")";
  // cell 0: steps taken; cell 1: blank position; cells [2, 2+n): moves.
  p.initial_store.cells.assign((size_t)(2 + n), 0);
  p.initial_store.cells[1] = start;
  p.initial_store.top_mark = 2;

  auto moves = [](int pos) {
    int r = pos / 4, c = pos % 4;
    std::vector<std::pair<int, int>> out;  // (direction, new position)
    if (r > 0) out.emplace_back(0, pos - 4);
    if (r < 3) out.emplace_back(1, pos + 4);
    if (c > 0) out.emplace_back(2, pos - 1);
    if (c < 3) out.emplace_back(3, pos + 1);
    return out;
  };

  p.expand = [n, goal, moves](const Store& s) {
    int steps = (int)s.cells[0];
    int pos = (int)s.cells[1];
    if (steps == n) return pos == goal ? Expansion::solution() : Expansion::fail();
    std::vector<Alternative> alts;
    for (auto [dir, to] : moves(pos)) {
      (void)to;
      alts.push_back({dir});
    }
    return Expansion::choice(std::move(alts));
  };
  p.apply = [moves](Store& s, Trail& trail, Alternative alt) {
    int steps = (int)s.cells[0];
    int pos = (int)s.cells[1];
    for (auto [dir, to] : moves(pos)) {
      if (dir == (int)alt.code) {
        trailed_write(s, trail, 0, steps + 1);
        trailed_write(s, trail, 1, to);
        trailed_write(s, trail, (size_t)(2 + steps), dir);
        return true;
      }
    }
    return false;
  };
  return p;
}

}  // namespace orsplit
