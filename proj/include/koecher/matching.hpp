#pragma once

#include <optional>
#include <string>
#include <vector>

#include "koecher/elliptic_curves.hpp"
#include "koecher/ideal.hpp"
#include "koecher/modp.hpp"

namespace koecher {

enum class PacketKind { eisenstein, cuspidal_rational, cuspidal_nonrational, old };
std::string kind_name(PacketKind k);
PacketKind parse_kind(const std::string& s);

struct PacketEigenvalue {
  PrimeIdeal prime;
  std::optional<Int> value;  // empty: not a rational scalar
};

/// A common eigenspace of the Hecke operators at one level.
struct Eigenpacket {
  Ideal level;
  int dimension = 0;
  std::vector<PacketEigenvalue> eigenvalues;  // in the order the operators were given
  PacketKind kind = PacketKind::cuspidal_nonrational;
  std::optional<Ideal> source;  // lower level of an old packet
  std::vector<std::vector<std::uint32_t>> basis;  // homology coordinates over the coefficient field

  std::optional<Int> eigenvalue(const PrimeIdeal& q) const;
};

bool in_hasse_window(Int a, Int norm);

struct HeckeAction {
  PrimeIdeal prime;
  DenseMat matrix;
};

/// Splits H^4 into common eigenspaces. An operator splits a space only along eigenvalues whose lift is
/// N(q) + 1 or inside the Hasse window; the remaining invariant complement stays together.
std::vector<Eigenpacket> decompose(const Ideal& level, int dim, const std::vector<HeckeAction>& ops, const Fp& f);

/// Sum of the dimensions of the Eisenstein packets.
int eisenstein_part(const std::vector<Eigenpacket>& packets);

struct PacketMatch {
  Eigenpacket packet;
  std::vector<Curve> candidates;  // curves of the level agreeing at every checked prime
  bool ambiguous = false;         // two candidates differ at an out-of-sample prime
  int primes_checked = 0;
  int agreements = 0;
  int extra_primes_checked = 0;   // good primes beyond the operators, compared between candidates
};

struct MatchReport {
  Ideal level;
  std::vector<PacketMatch> packets;  // cuspidal packets only
  std::vector<Curve> unmatched_curves;
};

/// Pairs rational cuspidal packets of a level with curves of that conductor by a_q = N(q) + 1 - #E(F_q).
MatchReport match_level(const Ideal& level, const std::vector<Eigenpacket>& packets, const std::vector<CurveClass>& curves,
                        Int extra_prime_bound = 50);

struct OldClass {
  Ideal level;
  Ideal source;
  std::size_t packet = 0;  // index in the level's packet list
};

/// Marks rational cuspidal packets whose eigenvalues repeat a one-dimensional cuspidal packet of a proper divisor
/// of the level at every common good prime, with dimension equal to the number of divisors of the quotient.
std::vector<OldClass> detect_old(std::vector<std::vector<Eigenpacket>>& levels);

}  // namespace koecher
