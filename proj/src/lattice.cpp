// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hamlearn/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace hamlearn {

SnakeOrder::SnakeOrder(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw ConfigError("snake order needs rows, cols >= 1");
  }
}

int SnakeOrder::to_chain(int row, int col) const {
  return col * rows_ + (col % 2 == 0 ? row : rows_ - 1 - row);
}

std::pair<int, int> SnakeOrder::to_grid(int index) const {
  const int col = index / rows_;
  const int offset = index % rows_;
  return {col % 2 == 0 ? offset : rows_ - 1 - offset, col};
}

Lattice::Lattice(LatticeKind kind, int rows, int cols, Boundary boundary)
    : kind_(kind), rows_(rows), cols_(cols), boundary_(boundary) {}

Lattice Lattice::chain(int length, Boundary boundary) {
  if (length < 1) throw ConfigError("chain length must be >= 1");
  if (boundary == Boundary::kPeriodic && length < 3) {
    throw ConfigError("invalid lattice: periodic chain needs length >= 3");
  }
  if (length > 64) throw ConfigError("chain length must be <= 64");
  return Lattice(LatticeKind::kChain, 1, length, boundary);
}

Lattice Lattice::grid(int rows, int cols, Boundary boundary) {
  if (rows < 1 || cols < 1) throw ConfigError("grid extents must be >= 1");
  if (boundary == Boundary::kPeriodic && (rows < 3 || cols < 3)) {
    throw ConfigError("invalid lattice: periodic grid needs extents >= 3");
  }
  if (rows * cols > 64) throw ConfigError("grid must have <= 64 sites");
  return Lattice(LatticeKind::kGrid, rows, cols, boundary);
}

std::vector<Edge> Lattice::edges() const {
  std::set<Edge> out;
  auto add = [&](int a, int b) { out.insert(Edge{std::min(a, b), std::max(a, b)}); };
  const bool periodic = boundary_ == Boundary::kPeriodic;
  if (kind_ == LatticeKind::kChain) {
    const int n = cols_;
    for (int i = 0; i + 1 < n; ++i) add(i, i + 1);
    if (periodic) add(0, n - 1);
  } else {
    const SnakeOrder snake(rows_, cols_);
    for (int c = 0; c < cols_; ++c) {
      for (int r = 0; r < rows_; ++r) {
        const int here = snake.to_chain(r, c);
        if (r + 1 < rows_) {
          add(here, snake.to_chain(r + 1, c));
        } else if (periodic) {
          add(here, snake.to_chain(0, c));
        }
        if (c + 1 < cols_) {
          add(here, snake.to_chain(r, c + 1));
        } else if (periodic) {
          add(here, snake.to_chain(r, 0));
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

std::string Lattice::describe() const {
  std::ostringstream os;
  if (kind_ == LatticeKind::kChain) {
    os << "chain L=" << cols_;
  } else {
    os << "grid " << rows_ << "x" << cols_;
  }
  os << (boundary_ == Boundary::kPeriodic ? " periodic" : " open");
  return os.str();
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kQim:
      return "qim";
    case Family::kXxz:
      return "xxz";
    case Family::kXy:
      return "xy";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "qim") return Family::kQim;
  if (lower == "xxz") return Family::kXxz;
  if (lower == "xy") return Family::kXy;
  throw ConfigError("unknown model family: " + std::string(name));
}

std::string_view param_name(Family family) {
  return family == Family::kXxz ? "Jz" : "h";
}

TermList build_terms(const ModelSpec& spec) {
  if (!std::isfinite(spec.param)) throw ConfigError("model parameter must be finite");
  TermList terms;
  terms.site_count = spec.lattice.site_count();
  const auto edges = spec.lattice.edges();
  const double j = spec.coupling;
  switch (spec.family) {
    case Family::kQim:
      for (const Edge& e : edges) {
        terms.two_site.push_back({e.a, e.b, SpinOp::kZ, SpinOp::kZ, j});
      }
      for (int k = 0; k < terms.site_count; ++k) {
        terms.one_site.push_back({k, SpinOp::kX, -spec.param});
      }
      break;
    case Family::kXxz:
      for (const Edge& e : edges) {
        terms.two_site.push_back({e.a, e.b, SpinOp::kX, SpinOp::kX, j});
        terms.two_site.push_back({e.a, e.b, SpinOp::kY, SpinOp::kY, j});
        if (spec.param != 0.0) {
          terms.two_site.push_back({e.a, e.b, SpinOp::kZ, SpinOp::kZ, j * spec.param});
        }
      }
      break;
    case Family::kXy:
      for (const Edge& e : edges) {
        terms.two_site.push_back({e.a, e.b, SpinOp::kX, SpinOp::kX, j});
        terms.two_site.push_back({e.a, e.b, SpinOp::kY, SpinOp::kY, j});
      }
      for (int k = 0; k < terms.site_count; ++k) {
        terms.one_site.push_back({k, SpinOp::kZ, spec.param});
      }
      break;
  }
  return terms;
}

HamiltonianOperator::HamiltonianOperator(const TermList& terms)
    : site_count_(terms.site_count) {
  if (site_count_ < 1 || site_count_ > 30) {
    throw ConfigError("dense Hamiltonian needs 1..30 sites");
  }
  const int n = site_count_;
  const std::size_t dim = std::size_t{1} << n;
  auto bit_of = [n](int site) { return std::uint64_t{1} << (n - 1 - site); };
  auto check_site = [n](int site) {
    if (site < 0 || site >= n) throw ConfigError("term site index out of range");
  };

  struct Diag {
    std::uint64_t sign_mask;
    double amp;
  };
  std::vector<Diag> diag_terms;

  for (const auto& t : terms.two_site) {
    check_site(t.i);
    check_site(t.j);
    if (t.i == t.j) throw ConfigError("two-site term on a single site");
    const int ys = (t.op_i == SpinOp::kY) + (t.op_j == SpinOp::kY);
    if (ys == 1) throw ConfigError("lone Sy in a two-site term is not real");
    FlipTerm flip{0, 0, t.coeff};
    bool flips = false;
    for (auto [site, op] : {std::pair{t.i, t.op_i}, std::pair{t.j, t.op_j}}) {
      switch (op) {
        case SpinOp::kX:
          flip.mask |= bit_of(site);
          flip.amp *= 0.5;
          flips = true;
          break;
        case SpinOp::kY:
          // i*Sy = [[0, 1/2], [-1/2, 0]]: -1/2 from up, +1/2 from down.
          flip.mask |= bit_of(site);
          flip.sign_mask ^= bit_of(site);
          flip.amp *= -0.5;
          flips = true;
          break;
        case SpinOp::kZ:
          flip.sign_mask ^= bit_of(site);
          flip.amp *= 0.5;
          break;
      }
    }
    if (ys == 2) flip.amp = -flip.amp;  // Sy Sy = -(i Sy)(i Sy)
    if (flips) {
      flips_.push_back(flip);
    } else {
      diag_terms.push_back({flip.sign_mask, flip.amp});
    }
  }
  for (const auto& t : terms.one_site) {
    check_site(t.site);
    switch (t.op) {
      case SpinOp::kX:
        flips_.push_back({bit_of(t.site), 0, 0.5 * t.coeff});
        break;
      case SpinOp::kZ:
        diag_terms.push_back({bit_of(t.site), 0.5 * t.coeff});
        break;
      case SpinOp::kY:
        throw ConfigError("one-site Sy is not real in the S^z basis");
    }
  }

  diagonal_.assign(dim, 0.0);
  for (const Diag& d : diag_terms) {
    for (std::size_t c = 0; c < dim; ++c) {
      diagonal_[c] += (std::popcount(c & d.sign_mask) & 1) ? -d.amp : d.amp;
    }
  }
}

void HamiltonianOperator::apply(std::span<const double> v,
                                std::span<double> out) const {
  const std::size_t dim = diagonal_.size();
  if (v.size() != dim || out.size() != dim) {
    throw ShapeError("apply_hamiltonian: vector dimension mismatch");
  }
  for (std::size_t c = 0; c < dim; ++c) out[c] = diagonal_[c] * v[c];
  for (const FlipTerm& f : flips_) {
    if (f.sign_mask == 0) {
      for (std::size_t c = 0; c < dim; ++c) out[c ^ f.mask] += f.amp * v[c];
    } else {
      for (std::size_t c = 0; c < dim; ++c) {
        const double a = (std::popcount(c & f.sign_mask) & 1) ? -f.amp : f.amp;
        out[c ^ f.mask] += a * v[c];
      }
    }
  }
}

std::vector<double> apply_hamiltonian(const TermList& terms,
                                      std::span<const double> v) {
  const HamiltonianOperator op(terms);
  std::vector<double> out(v.size());
  op.apply(v, out);
  return out;
}

}  // namespace hamlearn
