#pragma once

#include <stdexcept>

#include "mps/fault_tolerant.hpp"
#include "mps/graph.hpp"
#include "mps/hop_spanner.hpp"
#include "mps/metrics.hpp"

// End-to-end p-multipath spanner: a (2k-1)-hop spanner made (p-1)-fault
// tolerant by the wrapper is a p-multipath spanner with stretch phi(2k-1, p).

namespace mps {

namespace detail {
inline long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    __int128 r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<long long>::max())
            throw std::overflow_error("binomial overflow");
    }
    return static_cast<long long>(r);
}
}  // namespace detail

/// phi(s,p) = s*p*r(s,p), the multipath stretch carried over from an s-hop
/// (p-1)-fault-tolerant spanner. r(3,p) = 3 exactly; otherwise the binomial
/// bound r(s,p) = C(p+s-2, s-2) + C(p+s-3, s-2) is used. Requires s >= 3.
inline long long compute_phi(int s, int p) {
    if (s < 3) throw std::invalid_argument("phi(s,p) needs s >= 3");
    if (p < 1) throw std::invalid_argument("phi(s,p) needs p >= 1");
    long long r;
    if (s == 3)
        r = 3;
    else
        r = detail::binomial(p + s - 2, s - 2) + detail::binomial(p + s - 3, s - 2);
    return static_cast<long long>(s) * p * r;
}

enum class InnerKind { Cluster, Greedy };

struct PipelineParams {
    int p = 1;
    int k = 2;
    InnerKind inner = InnerKind::Cluster;
    double cluster_c = 2.0;  // sampling constant of the cluster construction
    double ft_c = 1.0;       // repeat constant of the fault-tolerant wrapper
    std::uint64_t seed = 0;
};

struct PipelineResult {
    Subgraph h;
    Rational declared_stretch;
    int hop_s;       // 2k-1
    int ft_r;        // p-1
    int iterations;  // wrapper repetitions actually run
};

/// Builds the spanner of the main pipeline: ft_spanner with r = p-1 wrapping
/// a (2k-1)-hop spanner construction. The declared stretch is phi(2k-1, p);
/// for k = 1 the hop spanner keeps every edge, which only yields a guarantee
/// in the degenerate p = 1 case (declared stretch 1).
inline PipelineResult multipath_spanner(const WeightedGraph& g, const PipelineParams& params) {
    if (params.p < 1 || params.k < 1) throw std::invalid_argument("p and k must be >= 1");
    const int s = 2 * params.k - 1;
    if (s < 3 && params.p > 1)
        throw std::invalid_argument("k = 1 with p > 1 has no declared stretch; use k >= 2");

    InnerSpanner inner = params.inner == InnerKind::Cluster
                             ? inner_cluster(params.k, params.cluster_c)
                             : inner_greedy(params.k);
    FtParams ft{params.p - 1, params.ft_c, params.seed};
    Subgraph h = ft_spanner(g, ft, inner);
    Rational declared = s >= 3 ? Rational(compute_phi(s, params.p)) : Rational(1);
    return PipelineResult{std::move(h), declared, s, params.p - 1,
                          ft_iteration_count(g.vertex_count(), params.p - 1, params.ft_c)};
}

/// All-pairs multipath stretch check at multiplicative alpha (beta = 0).
inline StretchReport verify_multipath_stretch(const WeightedGraph& g, const Subgraph& h, int p,
                                              Rational alpha) {
    return verify_stretch(g, h, p, alpha, Cost(0));
}

}  // namespace mps
