#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wsr/error.hpp"
#include "wsr/report.hpp"

namespace wsr {

// Closed-form evaluators for the paper-style risk bounds. All logs are
// natural.

/// Multi-resolution upper bound on E[W_r^r(P, empirical_n)]:
///   eps_K^r + (1/sqrt(n)) * sum_k coef(k)^r * sqrt(N(eps_k) - 1)
/// with coef(k) = diam for k = 1 and sum_{j=k-1}^K 2^{j-(k-1)} eps_j
/// otherwise. `main_text_variant` swaps the coefficient orientation to
/// sum_{j=k}^K 2^{K-j} eps_j for comparison.
BoundReport theorem1_bound(const std::vector<double>& eps_seq, double diam,
                           const std::vector<long long>& covering, long long n,
                           double r, bool main_text_variant = false);

/// The K = 1, eps_1 -> 0 limit on an m-point delta-discrete space:
/// delta^r * sqrt((m - 1)/n).
double theorem1_finite_limit(int m, double delta, long long n, double r);

enum class ShellTail {
  bounded,    // supplied shells exhaust the space; no tail term
  geometric,  // w_k = w_1 * 2^(k-1) continues past the supplied shells
};

/// Shell-decomposed upper bound for unbounded spaces. `shell_covers[k][j]`
/// is the eps_j-covering number of shell k; eps_seq may be empty (J = 0).
/// The per-shell probability proxy is q_k = min(1, w_k^-ell).
BoundReport theorem2_bound(const std::vector<double>& w_seq,
                           const std::vector<double>& eps_seq,
                           const std::vector<std::vector<long long>>& shell_covers,
                           double moment, double ell, long long n, double r,
                           ShellTail tail = ShellTail::bounded);

/// Minimax lower bound c_r * sup_k R(k)^r * sqrt((k-1)/n) over the
/// supplied packing radii, c_r = 3 log 2 / 2^(r+12). Keys below 2 or
/// above 32n, and non-finite radii, are ignored.
BoundReport theorem3_lower_bound(const std::map<int, double>& radii,
                                 long long n, double r);

/// sqrt((K-1)/n), bounding E||X - np||_1 / n for an n-multinomial.
double multinomial_l1_bound(long long k, long long n);

/// n * min(2p, sqrt(p/n)), bounding E|X - np| for X ~ Binomial(n, p).
double binomial_mad_bound(long long n, double p);

/// (3 log 2 / 4096) * sqrt((k-1)/n); requires 2 <= k <= 32n.
double multinomial_minimax_lower(long long k, long long n);

/// sum_j p_j log(p_j / q_j) with 0 log(0/q) = 0.
double kl_categorical(const std::vector<double>& p,
                      const std::vector<double>& q);

/// Well-separated probability vectors around uniform, indexed by a
/// Varshamov-Gilbert sign code.
struct HardInstanceFamily {
  int k = 0;            // category count
  long long n = 0;      // sample budget
  double c = 0;         // perturbation scale
  int code_length = 0;  // floor(k/2)
  std::vector<double> base;                   // uniform p_0
  std::vector<std::vector<int8_t>> codewords;  // tau in {-1,+1}^code_length
  std::vector<std::vector<double>> members;    // p_tau per codeword
  long long min_pairwise_hamming = 0;
  double min_pairwise_l1 = 0;
};

/// Builds the family with c = (1/16) sqrt(((k-1)/n) log 2); the code is
/// found greedily (exhaustively for code length <= 20). Requires k <= 32n.
HardInstanceFamily hard_instance_family(int k, long long n);

}  // namespace wsr
