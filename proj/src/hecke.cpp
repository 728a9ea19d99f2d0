#include "koecher/hecke.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace koecher {

std::vector<Mat2> hecke_cosets(const PrimeIdeal& q) {
  const OElt& pi = q.gen;
  std::vector<Mat2> out{{pi, OElt(0), OElt(0), OElt(1)}};
  for (Int i = 0; i < q.norm(); ++i) out.push_back({OElt(1), q.ideal.residue_from_index(i), OElt(0), pi});
  return out;
}

Chain hecke_image(const SparseVec& cycle, const QuotientComplex& complex, const std::vector<Mat2>& cosets, const Fp& f) {
  const auto& cells = complex.cells(3);
  const auto& reps = complex.fan().cones[3];
  Chain out;
  for (const auto& [idx, coef] : cycle) {
    const Cell& cell = cells[idx];
    Mat2 lift = complex.level().lift(cell.label);
    const auto& vs = reps[cell.rep].vectors;
    for (const Mat2& beta : cosets) {
      Mat2 m = beta * lift;
      Triangle t{{unimodular_vertex(m * vs[0]), unimodular_vertex(m * vs[1]), unimodular_vertex(m * vs[2])}};
      out.add(t, coef, f);
    }
  }
  return out;
}

DenseMat hecke_matrix(const Homology& homology, const QuotientComplex& complex, Reducer& reducer, const PrimeIdeal& q,
                      const HeckeOptions& options, HeckeStats* stats) {
  if (complex.level().divides_level(q)) throw std::invalid_argument("Hecke prime divides the level");
  const Fp& f = homology.field();
  const int dim = homology.dim();
  const auto cosets = hecke_cosets(q);
  for (int l = 0; l < complex.level().p1_size(); ++l) complex.level().lift(l);

  DenseMat m(dim, std::vector<std::uint32_t>(dim, 0));
  std::mutex mu;
  std::atomic<int> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (int k; (k = next++) < dim;) {
      try {
        HeckeStats local;
        Chain image = hecke_image(homology.basis()[k], complex, cosets, f);
        local.image_terms = image.size();
        if (options.verify_cycles && !boundary_mod_level(image, complex.level(), f).empty())
          throw InvariantViolation("Hecke image of a cycle is not a cycle");
        Chain reduced = reducer.reduce(std::move(image), &local.reduction, options.max_rounds);
        local.reduced_terms = reduced.size();
        if (options.verify_cycles && !boundary_mod_level(reduced, complex.level(), f).empty())
          throw InvariantViolation("reduced Hecke image is not a cycle");
        std::vector<std::uint32_t> col;
        try {
          col = homology.coordinates(reducer.to_cells(reduced));
        } catch (const std::domain_error& e) {
          throw InvariantViolation(std::string("reduced Hecke image: ") + e.what());
        }
        std::lock_guard<std::mutex> lk(mu);
        for (int i = 0; i < dim; ++i) m[i][k] = col[i];
        if (stats) {
          auto& r = stats->reduction;
          r.rounds = std::max(r.rounds, local.reduction.rounds);
          r.triangles += local.reduction.triangles;
          r.level0 += local.reduction.level0;
          r.averaged += local.reduction.averaged;
          r.non_decreasing += local.reduction.non_decreasing;
          stats->image_terms += local.image_terms;
          stats->reduced_terms += local.reduced_terms;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failure) failure = std::current_exception();
        next = dim;
      }
    }
  };
  int jobs = std::max(1, std::min(options.jobs, dim));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return m;
}

}  // namespace koecher
