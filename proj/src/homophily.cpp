#include "hypermp/homophily.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hypermp/error.hpp"

namespace hypermp {

DeltaReport delta_homophily(const HomophilyTrace<double>& trace, std::size_t t, double mu,
                            IsolatedPolicy policy) {
  if (t == 0 || t > trace.levels) {
    throw InvalidArgument("delta level t=" + std::to_string(t) + " outside [1, " +
                          std::to_string(trace.levels) + "]");
  }
  if (!(mu > 0.0)) throw InvalidArgument("mu must be > 0");

  const auto& cur = trace.node_scores[t];
  const auto& prev = trace.node_scores[t - 1];
  std::size_t stable = 0;
  std::size_t total = 0;
  for (std::size_t v = 0; v < trace.num_nodes(); ++v) {
    if (!trace.defined[v]) {
      if (policy == IsolatedPolicy::kCountAsStable) {
        ++stable;
        ++total;
      }
      continue;
    }
    ++total;
    if (std::abs(cur[v] - prev[v]) < mu) ++stable;
  }
  DeltaReport r{t, mu, 0.0, policy};
  r.value = total == 0 ? 1.0 : static_cast<double>(stable) / static_cast<double>(total);
  return r;
}

double ce_homophily(const Hypergraph& h, const LabelAssignment& labels) {
  if (h.num_nodes() == 0) return 1.0;
  auto adj = clique_expand(h);
  double total = 0.0;
  for (NodeId v = 0; v < h.num_nodes(); ++v) {
    const auto& nb = adj[v];
    if (nb.empty()) {
      total += 1.0;
      continue;
    }
    std::size_t same = 0;
    for (NodeId u : nb) same += labels[u] == labels[v] ? 1 : 0;
    total += static_cast<double>(same) / static_cast<double>(nb.size());
  }
  return total / static_cast<double>(h.num_nodes());
}

namespace {

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double kuniform_baseline(std::size_t n, std::size_t class_size, std::size_t k, std::size_t t) {
  if (k == 0 || t == 0 || t > k || class_size == 0 || class_size > n || k > n) {
    throw InvalidArgument("kuniform_baseline: need 1 <= t <= k <= n and 1 <= n_c <= n");
  }
  if (t - 1 > class_size - 1 || k - t > n - class_size) return 0.0;
  double log_b = log_binomial(class_size - 1, t - 1) + log_binomial(n - class_size, k - t) -
                 log_binomial(n - 1, k - 1);
  return std::exp(log_b);
}

KUniformReport kuniform_scores(const Hypergraph& h, const LabelAssignment& labels, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  KUniformReport report;
  report.k = k;
  for (const auto& e : h.edges()) report.num_size_k_edges += e.size() == k ? 1 : 0;
  if (report.num_size_k_edges == 0) return report;

  const auto n = h.num_nodes();
  const auto num_classes = labels.num_classes;
  std::vector<std::size_t> class_size(num_classes, 0);
  for (NodeId v = 0; v < n; ++v) ++class_size[labels[v]];

  // numer[c][t-1] = sum over class-c nodes v of d_t(v); denom[c] = sum of d_v^(k).
  std::vector<std::vector<double>> numer(num_classes, std::vector<double>(k, 0.0));
  std::vector<double> denom(num_classes, 0.0);
  std::vector<std::size_t> counts(num_classes);
  for (const auto& e : h.edges()) {
    if (e.size() != k) continue;
    std::fill(counts.begin(), counts.end(), 0);
    for (NodeId v : e) ++counts[labels[v]];
    for (ClassId c = 0; c < num_classes; ++c) {
      if (counts[c] == 0) continue;
      // Each of the counts[c] class-c members sees exactly counts[c] class-c members.
      numer[c][counts[c] - 1] += static_cast<double>(counts[c]);
      denom[c] += static_cast<double>(counts[c]);
    }
  }

  report.classes.resize(num_classes);
  for (ClassId c = 0; c < num_classes; ++c) {
    auto& s = report.classes[c];
    s.class_size = class_size[c];
    s.participates = denom[c] > 0.0;
    s.affinity.assign(k, std::numeric_limits<double>::quiet_NaN());
    s.baseline.assign(k, std::numeric_limits<double>::quiet_NaN());
    s.ratio.assign(k, std::numeric_limits<double>::quiet_NaN());
    s.normalized_bias.assign(k, std::numeric_limits<double>::quiet_NaN());
    if (class_size[c] > 0 && k <= n) {
      for (std::size_t t = 1; t <= k; ++t) s.baseline[t - 1] = kuniform_baseline(n, class_size[c], k, t);
    }
    if (!s.participates) continue;
    for (std::size_t t = 1; t <= k; ++t) {
      double eta = numer[c][t - 1] / denom[c];
      double b = s.baseline[t - 1];
      s.affinity[t - 1] = eta;
      s.ratio[t - 1] = b > 0.0 ? eta / b : std::numeric_limits<double>::quiet_NaN();
      if (eta >= b) {
        s.normalized_bias[t - 1] = b < 1.0 ? (eta - b) / (1.0 - b) : 0.0;
      } else {
        s.normalized_bias[t - 1] = (eta - b) / b;
      }
    }
  }
  return report;
}

double normalized_accuracy(double acc_a, double acc_b) {
  if (!(acc_b >= 0.0 && acc_b < 100.0)) {
    throw InvalidArgument("normalized accuracy undefined for acc_b outside [0, 100)");
  }
  if (!(acc_a >= 0.0 && acc_a <= 100.0)) throw InvalidArgument("acc_a outside [0, 100]");
  return (acc_a - acc_b) / (100.0 - acc_b);
}

double mean_defined(const std::vector<double>& scores, const std::vector<bool>& defined,
                    bool isolated_as_zero) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t v = 0; v < scores.size(); ++v) {
    if (defined[v]) {
      sum += scores[v];
      ++count;
    } else if (isolated_as_zero) {
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<double> per_class_mean(const std::vector<double>& scores,
                                   const std::vector<bool>& defined,
                                   const LabelAssignment& labels) {
  std::vector<double> sum(labels.num_classes, 0.0);
  std::vector<std::size_t> count(labels.num_classes, 0);
  for (std::size_t v = 0; v < scores.size(); ++v) {
    if (!defined[v]) continue;
    sum[labels[v]] += scores[v];
    ++count[labels[v]];
  }
  for (std::size_t c = 0; c < sum.size(); ++c) {
    sum[c] = count[c] == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : sum[c] / static_cast<double>(count[c]);
  }
  return sum;
}

}  // namespace hypermp
