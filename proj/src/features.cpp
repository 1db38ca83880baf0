#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "feast/enstm.hpp"
#include "feast/error.hpp"

namespace feast {

namespace {

bool heavier(const Feature& a, const Feature& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
}

}  // namespace

FeatureSet::FeatureSet(std::vector<Feature> features) : features_(std::move(features)) {
    index_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (i > 0 && features_[i].weight > features_[i - 1].weight) {
            throw ValidationError("features are not ordered by weight at '" + features_[i].term + "'");
        }
        if (!index_.emplace(features_[i].term, i).second) {
            throw ValidationError("duplicate feature term '" + features_[i].term + "'");
        }
    }
}

std::optional<std::size_t> FeatureSet::index_of(std::string_view term) const {
    const auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> FeatureSet::terms() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.term);
    return out;
}

std::vector<double> FeatureSet::weights() const {
    std::vector<double> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.weight);
    return out;
}

FeatureSet extract_features(const TopicTermMatrix& ttm, int top_topics, int top_terms) {
    const auto n_topics = ttm.weights.rows();
    const auto n_terms = ttm.weights.cols();
    if (top_topics < 1 || top_topics > n_topics) {
        throw ParameterError("top_topics must lie in [1, " + std::to_string(n_topics) + "]");
    }
    if (top_terms < 1) throw ParameterError("top_terms must be >= 1");
    if (static_cast<Eigen::Index>(ttm.terms.size()) != n_terms) {
        throw ParameterError("topic-term matrix and vocabulary disagree in size");
    }

    std::vector<Eigen::Index> topics(static_cast<std::size_t>(n_topics));
    std::iota(topics.begin(), topics.end(), 0);
    const Eigen::VectorXd mass = ttm.weights.rowwise().sum();
    std::stable_sort(topics.begin(), topics.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return mass(a) > mass(b); });

    std::vector<Feature> merged;
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_terms));

    for (int rank = 0; rank < top_topics; ++rank) {
        const Eigen::Index topic = topics[static_cast<std::size_t>(rank)];
        std::iota(order.begin(), order.end(), 0);
        const auto take = std::min<std::size_t>(static_cast<std::size_t>(top_terms), order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                          [&](Eigen::Index a, Eigen::Index b) {
                              const double wa = ttm.weights(topic, a);
                              const double wb = ttm.weights(topic, b);
                              if (wa != wb) return wa > wb;
                              return ttm.terms[static_cast<std::size_t>(a)] < ttm.terms[static_cast<std::size_t>(b)];
                          });
        for (std::size_t i = 0; i < take; ++i) {
            const Eigen::Index term = order[i];
            const double w = ttm.weights(topic, term);
            if (!(w > 0.0)) break;  // only positive associations become features
            const std::string& name = ttm.terms[static_cast<std::size_t>(term)];
            auto [it, inserted] = slot.emplace(name, merged.size());
            if (inserted) merged.push_back(Feature{name, 0.0, {}, {}});
            Feature& f = merged[it->second];
            f.topics.push_back(static_cast<std::size_t>(topic));
            f.topic_weights.push_back(w);
        }
    }
    for (auto& f : merged) {
        f.weight = 0.0;
        for (double w : f.topic_weights) f.weight += w;
    }
    std::stable_sort(merged.begin(), merged.end(), heavier);
    return FeatureSet(std::move(merged));
}

std::string features_to_csv(const FeatureSet& features) {
    std::string out = "term,weight,topic_indices\n";
    char buffer[64];
    for (const auto& f : features) {
        std::snprintf(buffer, sizeof buffer, "%.6f", f.weight);
        out += f.term;
        out += ',';
        out += buffer;
        out += ',';
        for (std::size_t i = 0; i < f.topics.size(); ++i) {
            if (i) out += ';';
            out += std::to_string(f.topics[i]);
        }
        out += '\n';
    }
    return out;
}

FeatureSet features_from_csv(std::string_view csv) {
    std::istringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line != "term,weight,topic_indices") {
        throw IoError("feature file lacks the 'term,weight,topic_indices' header");
    }
    std::vector<Feature> features;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fail = [&](const std::string& why) {
            return IoError("feature file line " + std::to_string(line_no) + ": " + why);
        };
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw fail("expected three columns");

        Feature f;
        f.term = line.substr(0, c1);
        if (f.term.empty()) throw fail("empty term");
        const std::string weight = line.substr(c1 + 1, c2 - c1 - 1);
        try {
            std::size_t used = 0;
            f.weight = std::stod(weight, &used);
            if (used != weight.size()) throw fail("bad weight '" + weight + "'");
        } catch (const std::logic_error&) {
            throw fail("bad weight '" + weight + "'");
        }
        if (f.weight < 0.0) throw fail("negative weight");

        std::string_view topics = std::string_view(line).substr(c2 + 1);
        while (!topics.empty()) {
            const auto semi = topics.find(';');
            const auto token = topics.substr(0, semi);
            std::size_t topic = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), topic);
            if (ec != std::errc{} || ptr != token.data() + token.size()) throw fail("bad topic index");
            f.topics.push_back(topic);
            if (semi == std::string_view::npos) break;
            topics.remove_prefix(semi + 1);
        }
        features.push_back(std::move(f));
    }
    return FeatureSet(std::move(features));
}

void save_features(const FeatureSet& features, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << features_to_csv(features);
    if (!out) throw IoError("error while writing " + path.string());
}

FeatureSet load_features(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return features_from_csv(buffer.str());
}

}  // namespace feast
