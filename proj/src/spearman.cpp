#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "feast/error.hpp"
#include "feast/evaluation.hpp"

namespace feast {

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 hold 1-based ranks i+1..j
        const double mean = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean;
        i = j;
    }
    return ranks;
}

namespace {

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return std::nullopt;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double t_test_p(double rho, std::size_t n) {
    if (n < 3) return 1.0;
    const double df = static_cast<double>(n - 2);
    const double denom = 1.0 - rho * rho;
    if (denom <= 0.0) return 0.0;
    const double t = rho * std::sqrt(df / denom);
    const boost::math::students_t dist(df);
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

double permutation_p(std::span<const double> rx, std::span<const double> ry, double rho) {
    std::vector<std::size_t> perm(ry.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> shuffled(ry.size());
    std::size_t extreme = 0;
    std::size_t total = 0;
    const double threshold = std::fabs(rho) - 1e-12;
    do {
        for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = ry[perm[i]];
        const auto r = pearson(rx, shuffled);
        if (r && std::fabs(*r) >= threshold) ++extreme;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y, PValueMethod method) {
    if (x.size() != y.size()) throw ParameterError("spearman inputs differ in length");
    if (x.size() < 3) throw ParameterError("spearman needs at least 3 observations");
    if (method == PValueMethod::exact_permutation && x.size() > 10) {
        throw ParameterError("exact permutation p-values are limited to n <= 10");
    }
    SpearmanResult out;
    out.n = x.size();
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    out.rho = pearson(rx, ry);
    if (!out.rho) return out;
    out.p = method == PValueMethod::exact_permutation ? permutation_p(rx, ry, *out.rho) : t_test_p(*out.rho, out.n);
    return out;
}

}  // namespace feast
