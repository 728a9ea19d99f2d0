#include "koecher/matching.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace koecher {

std::string kind_name(PacketKind k) {
  switch (k) {
    case PacketKind::eisenstein: return "eisenstein";
    case PacketKind::cuspidal_rational: return "cuspidal-rational";
    case PacketKind::cuspidal_nonrational: return "cuspidal-nonrational";
    case PacketKind::old: return "old";
  }
  return "?";
}

PacketKind parse_kind(const std::string& s) {
  for (auto k : {PacketKind::eisenstein, PacketKind::cuspidal_rational, PacketKind::cuspidal_nonrational, PacketKind::old})
    if (kind_name(k) == s) return k;
  throw std::invalid_argument("unknown packet kind: " + s);
}

std::optional<Int> Eigenpacket::eigenvalue(const PrimeIdeal& q) const {
  for (const auto& e : eigenvalues)
    if (e.prime == q) return e.value;
  return std::nullopt;
}

bool in_hasse_window(Int a, Int norm) { return a * a <= 4 * norm; }

namespace {

using Vec = std::vector<std::uint32_t>;

Vec mat_vec(const DenseMat& m, const Vec& v, const Fp& f) {
  Vec out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (m[i][j] && v[j]) out[i] = f.add(out[i], f.mul(m[i][j], v[j]));
  return out;
}

// Matrix of T on the span of the basis vectors, which must be T-invariant.
DenseMat restrict_to(const DenseMat& t, const std::vector<Vec>& basis, const Fp& f) {
  const int d = static_cast<int>(basis.size());
  const int n = static_cast<int>(t.size());
  DenseMat aug(n, Vec(2 * d, 0));
  for (int j = 0; j < d; ++j) {
    Vec img = mat_vec(t, basis[j], f);
    for (int i = 0; i < n; ++i) {
      aug[i][j] = basis[j][i];
      aug[i][d + j] = img[i];
    }
  }
  auto piv = rref(aug, f);
  if (static_cast<int>(piv.size()) != d || (d > 0 && piv.back() != d - 1))
    throw std::logic_error("subspace is not invariant under a Hecke operator");
  DenseMat out(d, Vec(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i][j] = aug[i][d + j];
  return out;
}

std::vector<Vec> combine(const std::vector<Vec>& basis, const std::vector<Vec>& coeffs, const Fp& f) {
  std::vector<Vec> out;
  for (const auto& c : coeffs) {
    Vec v(basis.empty() ? 0 : basis[0].size(), 0);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j])
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.add(v[i], f.mul(c[j], basis[j][i]));
    out.push_back(std::move(v));
  }
  return out;
}

DenseMat mat_pow(const DenseMat& m, int e, const Fp& f) {
  DenseMat r = identity_matrix(static_cast<int>(m.size()));
  for (int i = 0; i < e; ++i) r = mat_mul(r, m, f);
  return r;
}

// Basis of the column space.
std::vector<Vec> column_space(const DenseMat& m, const Fp& f) {
  const std::size_t n = m.size();
  DenseMat tr(n ? m[0].size() : 0, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < tr.size(); ++j) tr[j][i] = m[i][j];
  auto piv = rref(tr, f);
  tr.resize(piv.size());
  return tr;
}

bool accepted(Int a, Int norm) { return a == norm + 1 || in_hasse_window(a, norm); }

std::optional<std::uint32_t> scalar_of(const DenseMat& m) {
  const std::size_t d = m.size();
  if (d == 0) return std::nullopt;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (m[i][j] != (i == j ? m[0][0] : 0u)) return std::nullopt;
  return m[0][0];
}

}  // namespace

std::vector<Eigenpacket> decompose(const Ideal& level, int dim, const std::vector<HeckeAction>& ops, const Fp& f) {
  std::vector<std::vector<Vec>> spaces;
  if (dim > 0) {
    std::vector<Vec> all;
    for (int i = 0; i < dim; ++i) {
      Vec e(dim, 0);
      e[i] = 1;
      all.push_back(std::move(e));
    }
    spaces.push_back(std::move(all));
  }
  for (const auto& op : ops) {
    if (static_cast<int>(op.matrix.size()) != dim) throw std::invalid_argument("Hecke matrix has the wrong size");
    const Int norm = op.prime.norm();
    std::vector<std::vector<Vec>> next;
    for (const auto& w : spaces) {
      const int d = static_cast<int>(w.size());
      DenseMat tw = restrict_to(op.matrix, w, f);
      auto roots = poly_roots(charpoly(tw, f), f);
      std::sort(roots.begin(), roots.end());
      roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
      DenseMat rest = identity_matrix(d);
      for (auto lambda : roots) {
        if (!accepted(f.lift(lambda), norm)) continue;
        DenseMat shifted = mat_pow(mat_sub_scalar(tw, lambda, f), d, f);
        next.push_back(combine(w, null_space(shifted, d, f), f));
        rest = mat_mul(rest, shifted, f);
      }
      auto left = column_space(rest, f);
      if (!left.empty()) next.push_back(combine(w, left, f));
    }
    spaces = std::move(next);
  }

  std::vector<Eigenpacket> out;
  for (const auto& w : spaces) {
    Eigenpacket p;
    p.level = level;
    p.dimension = static_cast<int>(w.size());
    p.basis = w;
    bool eis = true, rational = true;
    for (const auto& op : ops) {
      const Int norm = op.prime.norm();
      PacketEigenvalue ev{op.prime, std::nullopt};
      if (auto s = scalar_of(restrict_to(op.matrix, w, f))) {
        Int a = f.lift(*s);
        if (accepted(a, norm)) ev.value = a;
      }
      eis = eis && ev.value && *ev.value == norm + 1;
      rational = rational && ev.value && in_hasse_window(*ev.value, norm);
      p.eigenvalues.push_back(std::move(ev));
    }
    p.kind = eis ? PacketKind::eisenstein : rational ? PacketKind::cuspidal_rational : PacketKind::cuspidal_nonrational;
    out.push_back(std::move(p));
  }
  auto key = [](const Eigenpacket& p) {
    std::vector<Int> vals;
    for (const auto& e : p.eigenvalues) vals.push_back(e.value ? *e.value : INT64_MIN);
    return std::make_tuple(static_cast<int>(p.kind), p.dimension, vals);
  };
  std::stable_sort(out.begin(), out.end(), [&](const Eigenpacket& a, const Eigenpacket& b) { return key(a) < key(b); });
  return out;
}

int eisenstein_part(const std::vector<Eigenpacket>& packets) {
  int d = 0;
  for (const auto& p : packets)
    if (p.kind == PacketKind::eisenstein) d += p.dimension;
  return d;
}

MatchReport match_level(const Ideal& level, const std::vector<Eigenpacket>& packets, const std::vector<CurveClass>& curves,
                        Int extra_prime_bound) {
  MatchReport report;
  report.level = level;
  std::vector<Curve> here;
  for (const auto& c : curves)
    if (c.conductor == level) here.push_back(c.representative);
  std::vector<char> used(here.size(), 0);
  for (const auto& p : packets) {
    if (p.kind == PacketKind::eisenstein) continue;
    PacketMatch m;
    m.packet = p;
    if (p.kind == PacketKind::cuspidal_rational && p.dimension == 1) {
      for (std::size_t i = 0; i < here.size(); ++i) {
        int agree = 0, checked = 0;
        for (const auto& ev : p.eigenvalues) {
          if (ev.prime.ideal.divides(level)) continue;
          ++checked;
          if (ev.value && trace_of_frobenius(here[i], ev.prime) == *ev.value) ++agree;
        }
        if (checked > 0 && agree == checked) {
          m.candidates.push_back(here[i]);
          m.primes_checked = checked;
          m.agreements = agree;
          used[i] = 1;
        }
      }
      if (m.candidates.size() > 1) {
        for (const auto& q : primes_up_to(extra_prime_bound)) {
          if (q.ideal.divides(level) || p.eigenvalue(q)) continue;
          ++m.extra_primes_checked;
          Int a0 = trace_of_frobenius(m.candidates[0], q);
          for (std::size_t i = 1; i < m.candidates.size(); ++i)
            if (trace_of_frobenius(m.candidates[i], q) != a0) m.ambiguous = true;
        }
      }
    }
    report.packets.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < here.size(); ++i)
    if (!used[i]) report.unmatched_curves.push_back(here[i]);
  return report;
}

std::vector<OldClass> detect_old(std::vector<std::vector<Eigenpacket>>& levels) {
  std::vector<OldClass> out;
  for (auto& packets : levels) {
    for (std::size_t k = 0; k < packets.size(); ++k) {
      Eigenpacket& p = packets[k];
      if (p.kind != PacketKind::cuspidal_rational || p.dimension < 2) continue;
      for (const auto& lower : levels) {
        if (lower.empty() || &lower == &packets) continue;
        const Ideal& m = lower.front().level;
        if (m == p.level || !m.divides(p.level)) continue;
        int divisors = 1;
        for (const auto& [P, e] : factor_ideal(p.level)) divisors *= e - valuation(m, P) + 1;
        if (divisors != p.dimension) continue;
        for (const auto& s : lower) {
          if (s.kind != PacketKind::cuspidal_rational || s.dimension != 1) continue;
          int common = 0;
          bool agree = true;
          for (const auto& ev : p.eigenvalues) {
            if (ev.prime.ideal.divides(p.level)) continue;
            auto other = s.eigenvalue(ev.prime);
            if (!other) continue;
            ++common;
            agree = agree && ev.value == other;
          }
          if (common > 0 && agree) {
            p.kind = PacketKind::old;
            p.source = m;
            out.push_back({p.level, m, k});
            break;
          }
        }
        if (p.kind == PacketKind::old) break;
      }
    }
  }
  return out;
}

}  // namespace koecher
