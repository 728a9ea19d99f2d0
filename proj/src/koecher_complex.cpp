#include "koecher/koecher_complex.hpp"

#include <algorithm>
#include <map>

namespace koecher {

LevelIdeal::LevelIdeal(const Ideal& n) : n_(n), factors_(factor_ideal(n)) {
  Int N = n_.norm();
  if (N > 4000) throw std::invalid_argument("level norm too large for the P^1 table: " + std::to_string(N));
  std::vector<std::vector<char>> in_prime;
  for (const auto& [P, e] : factors_) {
    std::vector<char> row(N);
    for (Int i = 0; i < N; ++i) row[i] = P.ideal.contains(n_.residue_from_index(i));
    in_prime.push_back(std::move(row));
  }
  std::vector<Int> units;
  for (Int i = 0; i < N; ++i) {
    bool u = true;
    for (const auto& row : in_prime) u = u && !row[i];
    if (u) units.push_back(i);
  }
  table_.assign(static_cast<std::size_t>(N * N), -1);
  for (Int a = 0; a < N; ++a)
    for (Int b = 0; b < N; ++b) {
      if (table_[a * N + b] != -1) continue;
      bool ok = true;
      for (const auto& row : in_prime) ok = ok && !(row[a] && row[b]);
      if (!ok) continue;
      int label = static_cast<int>(points_.size());
      OElt ra = n_.residue_from_index(a), rb = n_.residue_from_index(b);
      points_.emplace_back(ra, rb);
      for (Int u : units) {
        OElt ru = n_.residue_from_index(u);
        table_[index(ru * ra, ru * rb)] = label;
      }
    }
  lifts_.resize(points_.size());
  lifted_.assign(points_.size(), 0);
}

Int LevelIdeal::index(const OElt& a, const OElt& b) const {
  return n_.residue_index(n_.reduce(a)) * n_.norm() + n_.residue_index(n_.reduce(b));
}

std::string LevelIdeal::type() const {
  if (factors_.empty()) return "1";
  std::vector<int> exps;
  for (const auto& [P, e] : factors_) exps.push_back(e);
  std::sort(exps.begin(), exps.end());
  std::string s;
  const std::string letters = "pqrsuvw";
  for (std::size_t i = 0; i < exps.size(); ++i) {
    s += i < letters.size() ? letters[i] : '?';
    if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
  }
  return s;
}

bool LevelIdeal::divides_level(const PrimeIdeal& P) const {
  for (const auto& [Q, e] : factors_)
    if (Q == P) return true;
  return false;
}

bool LevelIdeal::coprime(const OElt& a, const OElt& b) const { return table_[index(a, b)] >= 0; }

int LevelIdeal::p1_label(const OElt& a, const OElt& b) const {
  int l = table_[index(a, b)];
  if (l < 0) throw std::domain_error("pair is not coprime to the level: (" + a.str() + ", " + b.str() + ")");
  return l;
}

std::pair<OElt, OElt> LevelIdeal::p1_point(int label) const { return points_.at(label); }

int LevelIdeal::act(int label, const Mat2& h) const {
  const auto& [c, d] = points_[label];
  return p1_label(c * h.a + d * h.c, c * h.b + d * h.d);
}

Mat2 LevelIdeal::lift(int label) const {
  if (lifted_[label]) return lifts_[label];
  auto [c, d] = points_.at(label);
  OElt g = n_.is_unit() ? OElt(1) : n_.generator();
  if (c.is_zero()) c = g;
  std::vector<OElt> shifts;
  for (int r = 0; r <= 4 && shifts.empty(); ++r)
    for (Int x = -r; x <= r; ++x)
      for (Int y = -r; y <= r; ++y)
        for (Int z = -r; z <= r; ++z) {
          if (std::max({std::abs(x), std::abs(y), std::abs(z)}) != r) continue;
          OElt dd = d + OElt{x, y, z} * g;
          if (Ideal::from_generators({c, dd}).is_unit()) shifts.push_back(dd);
        }
  if (shifts.empty()) throw std::runtime_error("no unimodular lift for P^1 label " + std::to_string(label));
  OElt dd = shifts.front();
  auto [x, y] = bezout(dd, c);
  Mat2 m{x, -y, c, dd};
  lifts_[label] = m;
  lifted_[label] = 1;
  return m;
}

Int p1_size_formula(const Ideal& n) {
  Int128 num = n.norm(), den = 1;
  for (const auto& [P, e] : factor_ideal(n)) {
    num *= P.norm() + 1;
    den *= P.norm();
  }
  return narrow(num / den);
}

int eisenstein_dimension(const LevelIdeal& n) {
  static const std::map<std::string, int> table = {{"p", 3}, {"p^2", 5}, {"pq", 7},
                                                   {"p^3", 7}, {"pq^2", 11}, {"pqr", 15}};
  auto it = table.find(n.type());
  if (it == table.end()) throw UnknownType("no Eisenstein dimension for factorization type " + n.type());
  return it->second;
}

QuotientComplex::QuotientComplex(const FanDatabase& fan, const LevelIdeal& level) : fan_(&fan), level_(&level) {
  int n = level.p1_size();
  for (int k = 2; k <= 4; ++k) {
    const auto& reps = fan.cones[k];
    refs_[k].assign(reps.size(), {});
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const Cone& cone = reps[r];
      if (!cone.interior) continue;
      auto& refs = refs_[k][r];
      refs.assign(n, CellRef{});
      std::vector<char> seen(n, 0);
      for (int x = 0; x < n; ++x) {
        if (seen[x]) continue;
        bool killed = false;
        std::map<int, int> sign_of;
        for (std::size_t i = 0; i < cone.stabilizer.size(); ++i) {
          int y = level.act(x, cone.stabilizer[i]);
          int s = cone.character[i];
          auto [it, fresh] = sign_of.emplace(y, s);
          if (!fresh && it->second != s) killed = true;
        }
        int idx = -1;
        if (!killed) {
          idx = static_cast<int>(cells_[k].size());
          cells_[k].push_back(Cell{static_cast<int>(r), x});
        }
        for (const auto& [y, s] : sign_of) {
          seen[y] = 1;
          refs[y] = killed ? CellRef{} : CellRef{idx, s};
        }
      }
    }
  }
}

CellRef QuotientComplex::find(int k, int rep, int label) const {
  const auto& byrep = refs_.at(k);
  if (rep < 0 || rep >= static_cast<int>(byrep.size()) || byrep[rep].empty()) return {};
  return byrep[rep][label];
}

SparseMatrix QuotientComplex::boundary(int k, const Fp& f) const {
  if (k != 3 && k != 4) throw std::invalid_argument("boundary is only assembled for k = 3, 4");
  SparseMatrix m;
  m.rows = static_cast<int>(cells_[k - 1].size());
  for (const Cell& c : cells_[k]) {
    std::vector<std::pair<int, std::int64_t>> entries;
    const auto& maps = fan_->faces[k][c.rep];
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const FaceMap& fm = maps[i];
      if (fm.rep < 0) continue;
      CellRef ref = find(k - 1, fm.rep, level_->act(c.label, fm.g));
      if (ref.index < 0) continue;
      int s = (i % 2 ? -1 : 1) * fm.sign * ref.sign;
      entries.emplace_back(ref.index, s);
    }
    m.cols.push_back(make_sparse(std::move(entries), f));
  }
  return m;
}

Homology::Homology(const QuotientComplex& complex, std::uint32_t prime)
    : f_(prime), echelon_(static_cast<int>(complex.cells(3).size()), f_) {
  SparseMatrix d3 = complex.boundary(3, f_);
  SparseMatrix d4 = complex.boundary(4, f_);
  for (const auto& col : d4.cols) echelon_.insert(col);
  boundaries_dim_ = echelon_.rank();
  auto z = kernel(d3, f_);
  cycles_dim_ = static_cast<int>(z.size());
  int want = cycles_dim_ - boundaries_dim_;
  if (want < 0) throw std::logic_error("boundaries exceed cycles: boundary of boundary is nonzero");
  for (const auto& v : z) {
    if (static_cast<int>(basis_.size()) == want) break;
    if (echelon_.insert(v)) basis_.push_back(v);
  }
  if (static_cast<int>(basis_.size()) != want) throw std::logic_error("cycle space does not contain the boundaries");
  // Each kernel vector is the new echelon row plus earlier rows; invert that triangular change of basis.
  DenseMat coords(want);
  for (int k = 0; k < want; ++k) coords[k] = raw_coordinates(basis_[k]);
  DenseMat aug(want, std::vector<std::uint32_t>(2 * want, 0));
  for (int i = 0; i < want; ++i) {
    for (int k = 0; k < want; ++k) aug[i][k] = coords[k][i];
    aug[i][want + i] = 1;
  }
  rref(aug, f_);
  to_basis_.assign(want, std::vector<std::uint32_t>(want, 0));
  for (int i = 0; i < want; ++i)
    for (int j = 0; j < want; ++j) to_basis_[i][j] = aug[i][want + j];
}

std::vector<std::uint32_t> Homology::raw_coordinates(const SparseVec& v) const {
  std::vector<std::uint32_t> dense(echelon_.ncols(), 0);
  for (const auto& [j, x] : v) dense[j] = x;
  std::vector<std::uint32_t> coeffs;
  echelon_.reduce(dense, &coeffs);
  for (auto x : dense)
    if (x) throw std::domain_error("chain is not a cycle");
  return std::vector<std::uint32_t>(coeffs.begin() + boundaries_dim_, coeffs.end());
}

std::vector<std::uint32_t> Homology::coordinates(const SparseVec& v) const {
  auto raw = raw_coordinates(v);
  std::vector<std::uint32_t> out(raw.size(), 0);
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = 0; j < raw.size(); ++j)
      if (to_basis_[i][j] && raw[j]) out[i] = f_.add(out[i], f_.mul(to_basis_[i][j], raw[j]));
  return out;
}

}  // namespace koecher
