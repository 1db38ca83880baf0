#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "feast/enstm.hpp"
#include "feast/error.hpp"

namespace feast {

void EnsembleConfig::validate() const {
    if (runs < 1) throw ParameterError("ensemble runs must be >= 1");
    if (k_base < 1 || k_final < 1) throw ParameterError("topic counts must be >= 1");
    if (top_terms < 1) throw ParameterError("top_terms must be >= 1");
    if (top_topics < 1 || top_topics > k_final) {
        throw ParameterError("top_topics must lie in [1, k_final=" + std::to_string(k_final) + "]");
    }
    if (max_iters < 1) throw ParameterError("max_iters must be >= 1");
    if (tolerance < 0.0) throw ParameterError("tolerance must be >= 0");
}

TopicTermMatrix run_ensemble(const SparseMatrix& V, const std::vector<std::string>& terms,
                             const EnsembleConfig& config) {
    config.validate();
    if (static_cast<Eigen::Index>(terms.size()) != V.cols()) {
        throw ParameterError("vocabulary size does not match matrix columns");
    }

    const auto runs = static_cast<std::size_t>(config.runs);
    std::vector<DenseMatrix> base_topics(runs);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t run = next++; run < runs; run = next++) {
            try {
                NmfOptions options;
                options.k = config.k_base;
                options.seed = config.base_seed + run;
                options.max_iters = config.max_iters;
                options.tolerance = config.tolerance;
                base_topics[run] = nmf(V, options).H;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = runs;
            }
        }
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(runs));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // stacked by run index, never by completion order
    DenseMatrix stacked(static_cast<Eigen::Index>(runs) * config.k_base, V.cols());
    for (std::size_t run = 0; run < runs; ++run) {
        stacked.middleRows(static_cast<Eigen::Index>(run) * config.k_base, config.k_base) = base_topics[run];
    }

    NmfOptions consensus;
    consensus.k = config.k_final;
    consensus.seed = config.base_seed;
    consensus.max_iters = config.max_iters;
    consensus.tolerance = config.tolerance;
    NmfResult result = nmf(stacked, consensus);
    spdlog::debug("consensus factorization: {} iterations, residual {}", result.iterations_run, result.residual);

    return TopicTermMatrix{std::move(result.H), terms};
}

}  // namespace feast
