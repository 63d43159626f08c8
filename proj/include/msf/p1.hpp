// The projective line over Z/nZ with a full normalization table.
//
// Canonical representative of a class (u:v): first coordinate is gcd(u, n)
// (or (0:1) when u = 0 mod n), second coordinate minimized over the residual
// unit stabilizer. The table stores, for every pair (u, v), the index of its
// representative and the unit lambda with (u, v) = lambda * rep.
#pragma once

#include "msf/arith.hpp"

namespace msf {

class P1Table {
 public:
  explicit P1Table(int64_t n) : n_(n) {
    if (n < 1) throw InputError("P1: level must be >= 1");
    if (n == 1) {
      points_.emplace_back(0, 0);
      index_.assign(1, 0);
      unit_.assign(1, 1);
      return;
    }
    index_.assign(static_cast<size_t>(n) * n, -1);
    unit_.assign(static_cast<size_t>(n) * n, 0);
    // first pass: identify canonical reps in lex order
    for (int64_t u = 0; u < n; ++u) {
      for (int64_t v = 0; v < n; ++v) {
        if (gcd_i64(gcd_i64(u, v), n) != 1) continue;
        int64_t ru, rv, lambda;
        normalize(u, v, ru, rv, lambda);
        if (ru == u && rv == v && index_[idx(u, v)] < 0) {
          index_[idx(u, v)] = static_cast<int32_t>(points_.size());
          unit_[idx(u, v)] = 1;
          points_.emplace_back(u, v);
        }
      }
    }
    // second pass: point every pair at its representative
    for (int64_t u = 0; u < n; ++u) {
      for (int64_t v = 0; v < n; ++v) {
        if (gcd_i64(gcd_i64(u, v), n) != 1) continue;
        int64_t ru, rv, lambda;
        normalize(u, v, ru, rv, lambda);
        index_[idx(u, v)] = index_[idx(ru, rv)] >= 0 ? index_[idx(ru, rv)] : -1;
        unit_[idx(u, v)] = static_cast<int32_t>(lambda);
        if (index_[idx(u, v)] < 0) throw InternalError("P1 normalization missed a rep");
      }
    }
  }

  int64_t level() const { return n_; }
  int64_t size() const { return static_cast<int64_t>(points_.size()); }
  const std::pair<int64_t, int64_t>& point(int64_t i) const { return points_[i]; }

  // returns index of the class of (u, v), or -1 when gcd(u, v, n) > 1;
  // lambda_out is the unit with (u, v) = lambda * representative
  int32_t lookup(int64_t u, int64_t v, int64_t& lambda_out) const {
    if (n_ == 1) { lambda_out = 1; return 0; }
    u = mod_pos(u, n_);
    v = mod_pos(v, n_);
    size_t i = idx(u, v);
    lambda_out = unit_[i];
    return index_[i];
  }

 private:
  size_t idx(int64_t u, int64_t v) const { return static_cast<size_t>(u) * n_ + v; }

  void normalize(int64_t u, int64_t v, int64_t& ru, int64_t& rv, int64_t& lambda) const {
    if (u == 0) {
      ru = 0;
      rv = 1;
      lambda = v;  // (0, v) = v * (0, 1)
      return;
    }
    int64_t g = gcd_i64(u, n_);
    // one unit s with s*u = g mod n: u/g is invertible mod n/g; lift
    int64_t s = inv_mod((u / g) % (n_ / g), n_ / g);
    // lift s to a unit mod n (s + k*(n/g) hits a unit since gcd(s, n/g) = 1)
    while (gcd_i64(s, n_) != 1) s += n_ / g;
    // minimize s*v over the stabilizer {w : w = 1 mod n/g, w unit}
    int64_t best_v = -1, best_w = 1;
    for (int64_t k = 0; k < g; ++k) {
      int64_t w = 1 + k * (n_ / g);
      if (gcd_i64(w, n_) != 1) continue;
      int64_t cand = static_cast<int64_t>((__int128)w * s % n_ * mod_pos(v, n_) % n_);
      if (best_v < 0 || cand < best_v) { best_v = cand; best_w = w; }
    }
    ru = g;
    rv = best_v;
    int64_t s_total = static_cast<int64_t>((__int128)best_w * s % n_);
    lambda = inv_mod(s_total, n_);  // (u, v) = lambda * (ru, rv)
  }

  int64_t n_;
  std::vector<std::pair<int64_t, int64_t>> points_;
  std::vector<int32_t> index_;
  std::vector<int32_t> unit_;
};

}  // namespace msf
