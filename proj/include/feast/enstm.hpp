#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "feast/corpus.hpp"

namespace feast {

using DenseMatrix = Eigen::MatrixXd;

struct NmfOptions {
    int k = 30;
    std::uint64_t seed = 0;
    int max_iters = 200;
    // stop once (previous - current) / previous residual drops below this
    double tolerance = 1e-5;
    // record the residual after every iteration in NmfResult::residual_trace
    bool track_residuals = false;
};

struct NmfResult {
    DenseMatrix W;  // rows x k
    DenseMatrix H;  // k x cols
    int k = 0;
    std::uint64_t seed = 0;
    double residual = 0.0;  // ||V - WH||_F
    int iterations_run = 0;
    std::vector<double> residual_trace;
};

/// Lee-Seung multiplicative updates on the Frobenius loss, starting from
/// uniform [0,1) factors drawn from `seed` (W first, then H, column-major).
///
/// Throws ParameterError when k is outside [1, min(rows, cols)] or V has a
/// negative entry, and DegenerateInputError when V is all zeros.
NmfResult nmf(const SparseMatrix& V, const NmfOptions& options);
NmfResult nmf(const DenseMatrix& V, const NmfOptions& options);

struct EnsembleConfig {
    int runs = 100;
    int k_base = 30;
    int k_final = 30;
    int top_topics = 30;
    int top_terms = 15;
    int max_iters = 200;
    double tolerance = 1e-5;
    std::uint64_t base_seed = 0;
    // worker threads for the base runs; 0 picks the hardware concurrency
    unsigned threads = 0;

    /// Throws ParameterError on an inconsistent configuration.
    void validate() const;
};

/// Consensus topics (rows) over the vocabulary (columns).
struct TopicTermMatrix {
    DenseMatrix weights;
    std::vector<std::string> terms;
};

/// Runs `runs` base factorizations of V with seeds base_seed + i, stacks
/// their H factors in run order and factorizes the stack into k_final
/// consensus topics (seed base_seed). The result does not depend on thread
/// count or scheduling.
TopicTermMatrix run_ensemble(const SparseMatrix& V, const std::vector<std::string>& terms,
                             const EnsembleConfig& config);

struct Feature {
    std::string term;
    double weight = 0.0;
    std::vector<std::size_t> topics;    // consensus topic indices, selection order
    std::vector<double> topic_weights;  // parallel to topics; empty when read from CSV
};

/// Weighted food-feature vocabulary in weight-descending order; the position
/// of a feature is its index everywhere else. Construction keeps the given
/// order and rejects duplicate terms or increasing weights.
class FeatureSet {
public:
    FeatureSet() = default;
    explicit FeatureSet(std::vector<Feature> features);

    [[nodiscard]] std::size_t size() const { return features_.size(); }
    [[nodiscard]] bool empty() const { return features_.empty(); }
    [[nodiscard]] const Feature& operator[](std::size_t i) const { return features_[i]; }
    [[nodiscard]] const std::vector<Feature>& features() const { return features_; }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view term) const;
    [[nodiscard]] std::vector<std::string> terms() const;
    [[nodiscard]] std::vector<double> weights() const;

    auto begin() const { return features_.begin(); }
    auto end() const { return features_.end(); }

private:
    std::vector<Feature> features_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Takes the `top_terms` heaviest terms of each of the `top_topics` heaviest
/// topics (by row mass) and merges repeated terms by summing their weights.
FeatureSet extract_features(const TopicTermMatrix& ttm, int top_topics, int top_terms);

/// CSV with header `term,weight,topic_indices`; weights use six decimals and
/// topic indices are ';'-separated.
std::string features_to_csv(const FeatureSet& features);
FeatureSet features_from_csv(std::string_view csv);
void save_features(const FeatureSet& features, const std::filesystem::path& path);
FeatureSet load_features(const std::filesystem::path& path);

}  // namespace feast
