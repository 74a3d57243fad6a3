#include "pmconv/decompose.hpp"

#include <algorithm>

namespace pmconv {

using exact::Matrix;

namespace {

bool all_zero(const std::vector<uint32_t>& v) {
  return std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; });
}

size_t pivot_of(const std::vector<uint32_t>& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) return i;
  return SIZE_MAX;
}

}  // namespace

Decomposition decompose(const PersistenceModule& m) {
  if (!m.base().is_grid() || m.base().grid().dim() != 1)
    throw std::invalid_argument("decompose: one-parameter grid modules only");
  const size_t w = m.base().size();
  const uint32_t p = m.p();
  Decomposition out;
  out.alive.resize(w);

  struct Active {
    size_t bar;
    std::vector<uint32_t> value;
  };
  std::vector<Active> active;

  for (size_t z = 0; z < w; ++z) {
    if (z > 0) {
      const Matrix& step = m.edge_map(z - 1, z);
      for (Active& a : active) a.value = step.mul_vec(a.value);
    }
    // Oldest birth takes the pivot; on a tie the earlier bar does.
    std::stable_sort(active.begin(), active.end(), [&](const Active& l, const Active& r) {
      return out.bars[l.bar].birth < out.bars[r.bar].birth;
    });

    std::vector<size_t> placed_bars;
    std::vector<std::vector<uint32_t>> placed;
    std::vector<size_t> pivots;

    // Reduces cand.value against the placed entries, mirroring every
    // subtraction on the trails over the overlap. Earlier-placed bars were
    // born no later, so their trails cover the whole overlap.
    auto reduce = [&](size_t cand_bar, std::vector<uint32_t>& value) {
      BarSummand& mine = out.bars[cand_bar];
      for (size_t k = 0; k < placed.size(); ++k) {
        size_t piv = pivots[k];
        if (piv == SIZE_MAX || value[piv] == 0) continue;
        uint32_t factor = exact::fp_mul(value[piv], exact::fp_inv(placed[k][piv], p), p);
        for (size_t i = 0; i < value.size(); ++i)
          value[i] = exact::fp_sub(value[i], exact::fp_mul(factor, placed[k][i], p), p);
        const BarSummand& other = out.bars[placed_bars[k]];
        for (size_t zz = mine.birth; zz < z; ++zz) {
          const auto& ov = other.trail[zz - other.birth];
          auto& mv = mine.trail[zz - mine.birth];
          for (size_t i = 0; i < mv.size(); ++i)
            mv[i] = exact::fp_sub(mv[i], exact::fp_mul(factor, ov[i], p), p);
        }
      }
    };

    std::vector<Active> next;
    for (Active& cand : active) {
      reduce(cand.bar, cand.value);
      if (all_zero(cand.value)) {
        out.bars[cand.bar].death = z;  // died entering this slot
        continue;
      }
      pivots.push_back(pivot_of(cand.value));
      placed.push_back(cand.value);
      placed_bars.push_back(cand.bar);
      out.bars[cand.bar].trail.push_back(cand.value);
      next.push_back(std::move(cand));
    }
    active = std::move(next);

    size_t d = m.dim_at(z);
    for (size_t i = 0; i < d; ++i) {
      std::vector<uint32_t> e(d, 0);
      e[i] = 1;
      size_t bar_id = out.bars.size();
      out.bars.push_back({z, w, {}});
      reduce(bar_id, e);
      if (all_zero(e)) {
        out.bars.pop_back();
        continue;
      }
      pivots.push_back(pivot_of(e));
      placed.push_back(e);
      placed_bars.push_back(bar_id);
      out.bars[bar_id].trail.push_back(e);
      active.push_back({bar_id, std::move(e)});
    }
    for (const Active& a : active) out.alive[z].push_back(a.bar);
  }

  out.basis.resize(w);
  out.inverse.resize(w);
  for (size_t z = 0; z < w; ++z) {
    size_t d = m.dim_at(z);
    if (out.alive[z].size() != d) throw std::logic_error("decompose: adapted basis is not square");
    Matrix b(p, d, d);
    for (size_t c = 0; c < d; ++c) {
      const BarSummand& bar = out.bars[out.alive[z][c]];
      const auto& v = bar.trail[z - bar.birth];
      for (size_t r = 0; r < d; ++r) b.set(r, c, v[r]);
    }
    out.basis[z] = b;
    out.inverse[z] = d ? exact::left_inverse(b) : Matrix(p, 0, 0);
  }
  return out;
}

}  // namespace pmconv
