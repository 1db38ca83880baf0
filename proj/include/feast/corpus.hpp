#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

namespace feast {

/// Per-100g nutrient quantities.
struct NutritionFacts {
    double fat_g = 0.0;
    double saturates_g = 0.0;
    double sugar_g = 0.0;
    double salt_g = 0.0;
    std::optional<double> calories_kcal;

    /// All values non-negative and saturates within fat.
    [[nodiscard]] bool valid() const;
};

struct RecipeDocument {
    std::string id;
    std::string title;
    std::vector<std::string> ingredients;
    std::vector<std::string> instructions;
    std::vector<std::string> tags;
    std::optional<int> servings;
    std::optional<int> cook_minutes;
    std::optional<NutritionFacts> nutrition;
    bool image_present = false;

    /// Checks the record-level invariants (non-empty id, some content,
    /// positive servings, non-negative cook time, valid nutrition).
    [[nodiscard]] bool well_formed() const;
};

void to_json(nlohmann::json& j, const NutritionFacts& n);
void from_json(const nlohmann::json& j, NutritionFacts& n);
void to_json(nlohmann::json& j, const RecipeDocument& doc);
void from_json(const nlohmann::json& j, RecipeDocument& doc);

enum class CorpusFormat { jsonl, textdir };

CorpusFormat parse_corpus_format(std::string_view name);

struct IngestResult {
    std::vector<RecipeDocument> documents;
    std::size_t skipped = 0;
    std::size_t total = 0;
};

/// Reads a corpus in one of the supported on-disk formats.
///
/// jsonl: one RecipeDocument JSON object per line; blank lines are ignored.
/// textdir: one plain-text file per recipe (sorted by file name), first line is
/// the title, followed by "INGREDIENTS:", "INSTRUCTIONS:", "TAGS:" and
/// "NUTRITION:" sections. The recipe id is the file stem.
///
/// Ill-formed records (bad JSON, missing id, duplicate id, no content, invalid
/// nutrition) are skipped and counted. Throws IoError for an unreadable path
/// and EmptyCorpusError when no record survives.
IngestResult ingest_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Parses a single textdir-format recipe. Returns nullopt when ill-formed.
std::optional<RecipeDocument> parse_text_recipe(std::string_view text, std::string id);

using Stoplist = std::unordered_set<std::string>;

/// Culinary units, quantities and a handful of function words.
const Stoplist& default_stoplist();

/// Lowercased tokens from title, ingredients and instructions, followed by the
/// tags. Text splits on anything outside [a-z0-9-]; each tag is one token with
/// inner whitespace replaced by '-'. Stoplisted tokens, pure numbers and tokens
/// shorter than three characters are dropped.
std::vector<std::string> tokenize(const RecipeDocument& doc, const Stoplist& stoplist);

using CountMatrix = Eigen::SparseMatrix<std::int32_t, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct DocumentTermMatrix {
    std::vector<std::string> terms;        // sorted
    std::vector<std::string> docs;         // recipe ids, corpus order
    CountMatrix counts;                    // docs x terms
    std::vector<std::int32_t> doc_freq;    // per term

    [[nodiscard]] std::size_t num_docs() const { return docs.size(); }
    [[nodiscard]] std::size_t num_terms() const { return terms.size(); }
    /// Index of `term` in the vocabulary, if present.
    [[nodiscard]] std::optional<std::size_t> term_index(std::string_view term) const;
};

struct DtmOptions {
    int min_df = 5;
    double max_df_fraction = 0.5;
};

/// Throws ConfigError when the thresholds filter out every term and
/// EmptyCorpusError for an empty document list.
DocumentTermMatrix build_dtm(const std::vector<RecipeDocument>& docs, const Stoplist& stoplist,
                             const DtmOptions& options = {});

/// Same as build_dtm but from pre-tokenized documents.
DocumentTermMatrix build_dtm(const std::vector<std::string>& doc_ids,
                             const std::vector<std::vector<std::string>>& tokens,
                             const DtmOptions& options = {});

struct TfidfMatrix {
    SparseMatrix values;       // docs x terms, rows L2-normalized
    std::vector<double> idf;   // ln(N / df)
};

/// Raw term frequency times ln(N/df), each non-zero row scaled to unit L2 norm.
TfidfMatrix tfidf(const DocumentTermMatrix& dtm);

/// Line-oriented text format:
///
///   feast-dtm 1
///   <docs> <terms> <nonzeros>
///   <doc id>            (one per line, <docs> lines)
///   <term>              (one per line, <terms> lines)
///   <doc> <term> <count> (zero-based indices, <nonzeros> lines, row-major)
void save_dtm(const DocumentTermMatrix& dtm, const std::filesystem::path& path);
DocumentTermMatrix load_dtm(const std::filesystem::path& path);

}  // namespace feast
