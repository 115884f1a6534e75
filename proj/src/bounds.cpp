#include "wsr/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace wsr {

namespace {

std::string seq_to_string(const std::vector<double>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

BoundReport theorem1_bound(const std::vector<double>& eps_seq, double diam,
                           const std::vector<long long>& covering, long long n,
                           double r, bool main_text_variant) {
  const int levels = int(eps_seq.size());
  if (levels < 1) fail(errc::invalid_argument, "need at least one eps level");
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  if (int(covering.size()) != levels)
    fail(errc::bad_counts, "one covering count per eps level required");
  for (long long c : covering)
    if (c < 1) fail(errc::bad_counts, "covering counts must be >= 1");
  if (!(eps_seq.front() > 0) || eps_seq.front() > diam + 1e-12)
    fail(errc::not_non_increasing, "eps_1 must lie in (0, Diam]");
  for (int i = 1; i < levels; ++i)
    if (!(eps_seq[i] > 0) || eps_seq[i] > eps_seq[i - 1])
      fail(errc::not_non_increasing, "eps sequence must be positive non-increasing");

  // res[k] = sum_{j=k}^K 2^(j-k) eps_j for k >= 1; res[0] = Diam.
  std::vector<double> res(levels + 1, 0.0);
  res[0] = diam;
  for (int k = levels; k >= 1; --k)
    res[k] = eps_seq[k - 1] + (k == levels ? 0.0 : 2.0 * res[k + 1]);

  BoundReport report;
  report.terms.emplace_back("truncation", std::pow(eps_seq.back(), r));
  for (int k = 1; k <= levels; ++k) {
    double coef;
    if (main_text_variant) {
      coef = 0;
      for (int j = k; j <= levels; ++j)
        coef += std::pow(2.0, levels - j) * eps_seq[j - 1];
    } else {
      coef = res[k - 1];
    }
    report.terms.emplace_back(
        "level " + std::to_string(k),
        std::pow(coef, r) * std::sqrt(double(covering[k - 1] - 1)) /
            std::sqrt(double(n)));
  }
  report.params["n"] = std::to_string(n);
  report.params["r"] = std::to_string(r);
  report.params["diam"] = std::to_string(diam);
  report.params["eps_seq"] = seq_to_string(eps_seq);
  report.params["variant"] = main_text_variant ? "main-text" : "recursion";
  report.value = report.recombine();
  return report;
}

double theorem1_finite_limit(int m, double delta, long long n, double r) {
  if (m < 1 || n < 1 || delta <= 0)
    fail(errc::invalid_argument, "finite-limit bound needs m,n >= 1, delta > 0");
  return std::pow(delta, r) * std::sqrt(double(m - 1) / double(n));
}

BoundReport theorem2_bound(const std::vector<double>& w_seq,
                           const std::vector<double>& eps_seq,
                           const std::vector<std::vector<long long>>& shell_covers,
                           double moment, double ell, long long n, double r,
                           ShellTail tail) {
  if (w_seq.empty() || w_seq.front() != 0)
    fail(errc::bad_radii, "w sequence must start at 0");
  for (size_t k = 1; k < w_seq.size(); ++k)
    if (w_seq[k] <= w_seq[k - 1])
      fail(errc::bad_radii, "w sequence must be increasing");
  if (!(moment >= 1)) fail(errc::moment_below_one, "moment must be >= 1");
  if (!(ell > 0) || n < 1 || !(r >= 1))
    fail(errc::invalid_argument, "need ell > 0, n >= 1, r >= 1");
  const int shells = int(w_seq.size());
  const int depth = int(eps_seq.size());
  for (int j = 1; j < depth; ++j)
    if (eps_seq[j] > eps_seq[j - 1])
      fail(errc::not_non_increasing, "eps sequence must be non-increasing");
  if (int(shell_covers.size()) != shells)
    fail(errc::bad_shell_table, "one cover row per shell required");
  for (const auto& row : shell_covers)
    if (int(row.size()) != depth)
      fail(errc::bad_shell_table, "one covering count per eps level required");

  // res[j] = sum_{t=j}^J 2^(J-t) eps_t (statement orientation).
  std::vector<double> res(depth + 1, 0.0);
  for (int j = depth; j >= 1; --j)
    res[j] = std::pow(2.0, depth - j) * eps_seq[j - 1] +
             (j == depth ? 0.0 : res[j + 1]);
  const double eps_last = depth > 0 ? eps_seq.back() : 0.0;
  const double scale = std::pow(moment, ell);

  BoundReport report;
  for (int k = 0; k < shells; ++k) {
    const double w = w_seq[k];
    // Markov proxy for P(B_k), capped at the trivial bound 1.
    const double q = (w <= 0) ? 1.0 : std::min(1.0, std::pow(w, -ell));
    double base = q * std::pow(eps_last, r);
    base += std::pow(2.0, r) * std::pow(w, r) *
            std::min(2.0 * q, std::sqrt(q / double(n)));
    report.terms.emplace_back("shell " + std::to_string(k), scale * base);
    for (int j = 1; j <= depth; ++j) {
      const double cover = double(shell_covers[k][j - 1]);
      report.terms.emplace_back(
          "shell " + std::to_string(k) + " level " + std::to_string(j),
          scale * std::pow(res[j], r) *
              std::min(2.0 * q, std::sqrt(q / double(n) * cover)));
    }
  }

  if (tail == ShellTail::geometric) {
    if (!(ell > r))
      fail(errc::bad_shell_table,
           "geometric tail requires ell > r for convergence");
    if (shells < 2)
      fail(errc::bad_shell_table, "geometric tail needs at least one shell");
    for (int k = 2; k < shells; ++k)
      if (std::abs(w_seq[k] - 2.0 * w_seq[k - 1]) > 1e-9 * w_seq[k])
        fail(errc::bad_shell_table, "geometric tail requires w_k = w_1 2^(k-1)");
    const double w_last = w_seq.back();
    // Beyond the supplied shells every min{...} is bounded by 2 q_k, and
    // the q_k sums are geometric.
    const double sum_q =
        std::pow(w_last, -ell) * std::pow(2.0, -ell) / (1 - std::pow(2.0, -ell));
    const double sum_wq = std::pow(w_last, r - ell) * std::pow(2.0, r - ell) /
                          (1 - std::pow(2.0, r - ell));
    double tail_val = std::pow(eps_last, r) * sum_q +
                      std::pow(2.0, r) * 2.0 * sum_wq;
    double res_sum = 0;
    for (int j = 1; j <= depth; ++j) res_sum += std::pow(res[j], r);
    tail_val += 2.0 * res_sum * sum_q;
    report.terms.emplace_back("tail", scale * tail_val);
  }

  report.params["n"] = std::to_string(n);
  report.params["r"] = std::to_string(r);
  report.params["ell"] = std::to_string(ell);
  report.params["moment"] = std::to_string(moment);
  report.params["w_seq"] = seq_to_string(w_seq);
  report.params["eps_seq"] = seq_to_string(eps_seq);
  report.value = report.recombine();
  return report;
}

BoundReport theorem3_lower_bound(const std::map<int, double>& radii,
                                 long long n, double r) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  const double c_r = 3.0 * std::log(2.0) / std::pow(2.0, r + 12.0);
  BoundReport report;
  report.aggregate = BoundReport::Aggregate::sup;
  int argmax = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [k, radius] : radii) {
    if (k < 2 || (long long)k > 32 * n || !std::isfinite(radius)) continue;
    const double term =
        c_r * std::pow(radius, r) * std::sqrt(double(k - 1) / double(n));
    report.terms.emplace_back("k=" + std::to_string(k), term);
    if (term > best) {
      best = term;
      argmax = k;
    }
  }
  if (report.terms.empty())
    fail(errc::no_finite_radii, "no usable packing radius supplied");
  report.params["n"] = std::to_string(n);
  report.params["r"] = std::to_string(r);
  report.params["c_r"] = std::to_string(c_r);
  report.params["argmax_k"] = std::to_string(argmax);
  report.value = report.recombine();
  return report;
}

double multinomial_l1_bound(long long k, long long n) {
  if (k < 1 || n < 1) fail(errc::invalid_argument, "need k,n >= 1");
  return std::sqrt(double(k - 1) / double(n));
}

double binomial_mad_bound(long long n, double p) {
  if (n < 1 || p < 0 || p > 1)
    fail(errc::invalid_argument, "need n >= 1, p in [0,1]");
  return double(n) * std::min(2.0 * p, std::sqrt(p / double(n)));
}

double multinomial_minimax_lower(long long k, long long n) {
  if (n < 1 || k < 2) fail(errc::invalid_argument, "need n >= 1, k >= 2");
  if (k > 32 * n)
    fail(errc::k_too_large_for_n, "lemma requires k <= 32n");
  return 3.0 * std::log(2.0) / 4096.0 * std::sqrt(double(k - 1) / double(n));
}

double kl_categorical(const std::vector<double>& p,
                      const std::vector<double>& q) {
  if (p.size() != q.size())
    fail(errc::invalid_argument, "dimension mismatch");
  double kl = 0;
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] <= 0) continue;  // 0 log(0/q) = 0
    if (q[j] <= 0)
      fail(errc::absolute_continuity_violation,
           "p puts mass where q vanishes (index " + std::to_string(j) + ")");
    kl += p[j] * std::log(p[j] / q[j]);
  }
  return kl;
}

namespace {

int hamming(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

// Greedy code with min pairwise Hamming distance >= min_dist, stopping
// once `cap` words are found; the Fano condition only needs the
// Varshamov-Gilbert target size, not a maximal code.
std::vector<uint64_t> greedy_code(int length, int min_dist, size_t cap) {
  std::vector<uint64_t> code;
  auto admit = [&](uint64_t w) {
    for (uint64_t c : code)
      if (hamming(c, w) < min_dist) return false;
    return true;
  };
  if (length <= 20) {
    for (uint64_t w = 0; w < (uint64_t(1) << length) && code.size() < cap; ++w)
      if (admit(w)) code.push_back(w);
    return code;
  }
  // Seeded randomized greedy for long codes.
  std::mt19937_64 rng(0x5eedc0de);
  const uint64_t mask =
      length == 64 ? ~uint64_t(0) : ((uint64_t(1) << length) - 1);
  size_t attempts = 0;
  const size_t attempt_cap = 4096 * std::max<size_t>(cap, 64);
  while (code.size() < cap && attempts++ < attempt_cap) {
    const uint64_t w = rng() & mask;
    if (admit(w)) code.push_back(w);
  }
  return code;
}

}  // namespace

HardInstanceFamily hard_instance_family(int k, long long n) {
  if (k < 2 || n < 1) fail(errc::invalid_argument, "need k >= 2, n >= 1");
  if ((long long)k > 32 * n)
    fail(errc::k_too_large_for_n, "construction requires k <= 32n");

  HardInstanceFamily fam;
  fam.k = k;
  fam.n = n;
  fam.code_length = k / 2;
  fam.c = std::sqrt(double(k - 1) / double(n) * std::log(2.0)) / 16.0;
  fam.base.assign(k, 1.0 / k);

  const int h = fam.code_length;
  const int min_dist = std::max(1, int(std::ceil(h / 8.0 - 1e-12)));
  const size_t target =
      size_t(std::ceil(std::exp(h * std::log(2.0) / 8.0) - 1e-9));
  std::vector<uint64_t> code =
      greedy_code(h, min_dist, std::max<size_t>(2 * target, 16));
  if (code.size() < std::max<size_t>(target, 2))
    fail(errc::solver_failure, "code search fell short of the target size");

  long long min_ham = h;
  for (size_t a = 0; a < code.size(); ++a)
    for (size_t b = a + 1; b < code.size(); ++b)
      min_ham = std::min<long long>(min_ham, hamming(code[a], code[b]));
  fam.min_pairwise_hamming = min_ham;
  fam.min_pairwise_l1 = 4.0 * fam.c * double(min_ham) / double(k);

  for (uint64_t w : code) {
    std::vector<int8_t> tau(h);
    std::vector<double> p = fam.base;
    for (int j = 0; j < h; ++j) {
      tau[j] = (w >> j) & 1 ? int8_t(1) : int8_t(-1);
      p[2 * j] += tau[j] * fam.c / k;
      p[2 * j + 1] -= tau[j] * fam.c / k;
    }
    fam.codewords.push_back(std::move(tau));
    fam.members.push_back(std::move(p));
  }
  return fam;
}

}  // namespace wsr
