#include "feast/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "feast/error.hpp"

namespace feast {

namespace fs = std::filesystem;
using nlohmann::json;

bool NutritionFacts::valid() const {
    if (fat_g < 0.0 || saturates_g < 0.0 || sugar_g < 0.0 || salt_g < 0.0) return false;
    if (calories_kcal && *calories_kcal < 0.0) return false;
    return saturates_g <= fat_g;
}

bool RecipeDocument::well_formed() const {
    if (id.empty()) return false;
    if (ingredients.empty() && instructions.empty() && tags.empty()) return false;
    if (servings && *servings <= 0) return false;
    if (cook_minutes && *cook_minutes < 0) return false;
    if (nutrition && !nutrition->valid()) return false;
    return true;
}

void to_json(json& j, const NutritionFacts& n) {
    j = json{{"fat_g", n.fat_g}, {"saturates_g", n.saturates_g}, {"sugar_g", n.sugar_g},
             {"salt_g", n.salt_g}};
    if (n.calories_kcal) j["calories_kcal"] = *n.calories_kcal;
}

void from_json(const json& j, NutritionFacts& n) {
    j.at("fat_g").get_to(n.fat_g);
    j.at("saturates_g").get_to(n.saturates_g);
    j.at("sugar_g").get_to(n.sugar_g);
    j.at("salt_g").get_to(n.salt_g);
    if (auto it = j.find("calories_kcal"); it != j.end() && !it->is_null()) {
        n.calories_kcal = it->get<double>();
    } else {
        n.calories_kcal.reset();
    }
}

void to_json(json& j, const RecipeDocument& doc) {
    j = json{{"id", doc.id},
             {"title", doc.title},
             {"ingredients", doc.ingredients},
             {"instructions", doc.instructions},
             {"tags", doc.tags},
             {"image_present", doc.image_present}};
    if (doc.servings) j["servings"] = *doc.servings;
    if (doc.cook_minutes) j["cook_minutes"] = *doc.cook_minutes;
    if (doc.nutrition) j["nutrition"] = *doc.nutrition;
}

namespace {

template <typename T>
void optional_field(const json& j, const char* key, std::optional<T>& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        out = it->get<T>();
    } else {
        out.reset();
    }
}

template <typename T>
void defaulted_field(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

}  // namespace

void from_json(const json& j, RecipeDocument& doc) {
    j.at("id").get_to(doc.id);
    defaulted_field(j, "title", doc.title);
    defaulted_field(j, "ingredients", doc.ingredients);
    defaulted_field(j, "instructions", doc.instructions);
    defaulted_field(j, "tags", doc.tags);
    defaulted_field(j, "image_present", doc.image_present);
    optional_field(j, "servings", doc.servings);
    optional_field(j, "cook_minutes", doc.cook_minutes);
    optional_field(j, "nutrition", doc.nutrition);
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "textdir") return CorpusFormat::textdir;
    throw ParameterError("unknown corpus format '" + std::string(name) +
                         "' (expected jsonl or textdir)");
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

class Accumulator {
public:
    void offer(std::optional<RecipeDocument> doc, std::string_view where) {
        ++result_.total;
        if (!doc || !doc->well_formed()) {
            skip(where, "ill-formed record");
            return;
        }
        if (!seen_.insert(doc->id).second) {
            skip(where, "duplicate id '" + doc->id + "'");
            return;
        }
        result_.documents.push_back(std::move(*doc));
    }

    void skip(std::string_view where, const std::string& why) {
        ++result_.skipped;
        spdlog::warn("skipping {}: {}", where, why);
    }

    IngestResult finish(const fs::path& path) && {
        if (result_.documents.empty()) {
            throw EmptyCorpusError("no well-formed recipes in " + path.string() + " (" +
                                   std::to_string(result_.skipped) + " skipped)");
        }
        if (result_.skipped > 0) {
            spdlog::info("ingested {} recipes, skipped {}", result_.documents.size(),
                         result_.skipped);
        }
        return std::move(result_);
    }

    IngestResult& result() { return result_; }

private:
    IngestResult result_;
    std::unordered_set<std::string> seen_;
};

IngestResult ingest_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read corpus file " + path.string());

    Accumulator acc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = path.filename().string() + ":" + std::to_string(line_no);
        std::optional<RecipeDocument> doc;
        try {
            doc = json::parse(line).get<RecipeDocument>();
        } catch (const json::exception& e) {
            ++acc.result().total;
            acc.skip(where, e.what());
            continue;
        }
        acc.offer(std::move(doc), where);
    }
    if (in.bad()) throw IoError("error while reading " + path.string());
    return std::move(acc).finish(path);
}

IngestResult ingest_textdir(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_directory(path, ec)) throw IoError("corpus directory not readable: " + path.string());

    std::vector<fs::path> files;
    for (fs::directory_iterator it(path, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file()) files.push_back(it->path());
    }
    if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    Accumulator acc;
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw IoError("cannot read recipe file " + file.string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        acc.offer(parse_text_recipe(buffer.str(), file.stem().string()), file.filename().string());
    }
    return std::move(acc).finish(path);
}

bool parse_number(const std::string& text, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(text, &used);
        return used == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

std::optional<RecipeDocument> parse_text_recipe(std::string_view text, std::string id) {
    enum class Section { none, ingredients, instructions, tags, nutrition };

    RecipeDocument doc;
    doc.id = std::move(id);

    std::istringstream in{std::string(text)};
    std::string raw;
    bool have_title = false;
    Section section = Section::none;
    std::map<std::string, double> nutrients;

    while (std::getline(in, raw)) {
        const std::string line = trim(raw);
        if (!have_title) {
            if (line.empty()) continue;
            doc.title = line;
            have_title = true;
            continue;
        }
        if (line.empty()) continue;
        if (line == "INGREDIENTS:") { section = Section::ingredients; continue; }
        if (line == "INSTRUCTIONS:") { section = Section::instructions; continue; }
        if (line == "TAGS:") { section = Section::tags; continue; }
        if (line == "NUTRITION:") { section = Section::nutrition; continue; }

        switch (section) {
            case Section::none:
                return std::nullopt;  // stray text between title and first header
            case Section::ingredients: doc.ingredients.push_back(line); break;
            case Section::instructions: doc.instructions.push_back(line); break;
            case Section::tags: doc.tags.push_back(line); break;
            case Section::nutrition: {
                const auto eq = line.find('=');
                if (eq == std::string::npos) return std::nullopt;
                double value = 0.0;
                if (!parse_number(trim(line.substr(eq + 1)), value)) return std::nullopt;
                nutrients[trim(line.substr(0, eq))] = value;
                break;
            }
        }
    }
    if (!have_title) return std::nullopt;

    if (!nutrients.empty()) {
        NutritionFacts n;
        const auto take = [&](const char* key, double& slot) {
            auto it = nutrients.find(key);
            if (it == nutrients.end()) return false;
            slot = it->second;
            nutrients.erase(it);
            return true;
        };
        if (!take("fat_g", n.fat_g) || !take("saturates_g", n.saturates_g) ||
            !take("sugar_g", n.sugar_g) || !take("salt_g", n.salt_g)) {
            return std::nullopt;
        }
        double kcal = 0.0;
        if (take("calories_kcal", kcal)) n.calories_kcal = kcal;
        if (!nutrients.empty()) return std::nullopt;  // unknown keys
        doc.nutrition = n;
    }
    if (!doc.well_formed()) return std::nullopt;
    return doc;
}

IngestResult ingest_corpus(const fs::path& path, CorpusFormat format) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw IoError("corpus path does not exist: " + path.string());
    switch (format) {
        case CorpusFormat::jsonl: return ingest_jsonl(path);
        case CorpusFormat::textdir: return ingest_textdir(path);
    }
    throw ParameterError("unsupported corpus format");
}

const Stoplist& default_stoplist() {
    static const Stoplist words = {
        // units and quantities
        "cup", "cups", "tbsp", "tbs", "tablespoon", "tablespoons", "tsp", "teaspoon", "teaspoons",
        "oz", "ounce", "ounces", "lb", "lbs", "pound", "pounds", "gram", "grams", "kg", "ml",
        "liter", "litre", "liters", "litres", "pint", "pints", "quart", "quarts", "pinch", "dash",
        "minute", "minutes", "hour", "hours", "inch", "inches", "degree", "degrees", "half",
        "quarter", "piece", "pieces", "can", "cans", "package", "packages", "large", "medium",
        "small",
        // function words
        "and", "the", "for", "with", "into", "onto", "from", "until", "then", "about", "each",
        "over", "your", "you", "are", "not", "all", "any", "some", "this", "that", "these",
        "those", "will", "while", "when", "well", "also", "more", "less", "very",
    };
    return words;
}

namespace {

bool is_token_char(unsigned char c) { return std::isalnum(c) || c == '-'; }

bool keep_token(const std::string& token, const Stoplist& stoplist) {
    if (token.size() < 3) return false;
    const bool numeric = std::all_of(token.begin(), token.end(), [](unsigned char c) {
        return std::isdigit(c) || c == '-';
    });
    if (numeric) return false;
    return !stoplist.contains(token);
}

void split_text(std::string_view text, const Stoplist& stoplist, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_token_char(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && is_token_char(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) {
            std::string token = lower(text.substr(i, j - i));
            const auto first = token.find_first_not_of('-');
            if (first != std::string::npos) {
                const auto last = token.find_last_not_of('-');
                token = token.substr(first, last - first + 1);
                if (keep_token(token, stoplist)) out.push_back(std::move(token));
            }
        }
        i = j;
    }
}

}  // namespace

std::vector<std::string> tokenize(const RecipeDocument& doc, const Stoplist& stoplist) {
    std::vector<std::string> out;
    split_text(doc.title, stoplist, out);
    for (const auto& line : doc.ingredients) split_text(line, stoplist, out);
    for (const auto& line : doc.instructions) split_text(line, stoplist, out);
    for (const auto& tag : doc.tags) {
        std::string token;
        bool pending_gap = false;
        for (unsigned char c : trim(tag)) {
            if (std::isspace(c)) {
                pending_gap = true;
                continue;
            }
            if (pending_gap && !token.empty()) token.push_back('-');
            pending_gap = false;
            token.push_back(static_cast<char>(std::tolower(c)));
        }
        if (keep_token(token, stoplist)) out.push_back(std::move(token));
    }
    return out;
}

std::optional<std::size_t> DocumentTermMatrix::term_index(std::string_view term) const {
    const auto it = std::lower_bound(terms.begin(), terms.end(), term);
    if (it == terms.end() || *it != term) return std::nullopt;
    return static_cast<std::size_t>(it - terms.begin());
}

DocumentTermMatrix build_dtm(const std::vector<RecipeDocument>& docs, const Stoplist& stoplist,
                             const DtmOptions& options) {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> tokens;
    ids.reserve(docs.size());
    tokens.reserve(docs.size());
    for (const auto& doc : docs) {
        ids.push_back(doc.id);
        tokens.push_back(tokenize(doc, stoplist));
    }
    return build_dtm(ids, tokens, options);
}

DocumentTermMatrix build_dtm(const std::vector<std::string>& doc_ids,
                             const std::vector<std::vector<std::string>>& tokens,
                             const DtmOptions& options) {
    if (doc_ids.empty()) throw EmptyCorpusError("cannot build a document-term matrix from zero documents");
    if (doc_ids.size() != tokens.size()) throw ParameterError("doc id / token list size mismatch");
    if (options.min_df < 1) throw ConfigError("min_df must be >= 1");
    if (!(options.max_df_fraction > 0.0 && options.max_df_fraction <= 1.0)) {
        throw ConfigError("max_df_fraction must lie in (0, 1]");
    }

    // term -> df; std::map keeps the vocabulary sorted
    std::map<std::string, std::int32_t> df;
    for (const auto& doc_tokens : tokens) {
        std::unordered_set<std::string_view> seen(doc_tokens.begin(), doc_tokens.end());
        for (auto t : seen) ++df[std::string(t)];
    }

    const double n_docs = static_cast<double>(doc_ids.size());
    DocumentTermMatrix dtm;
    dtm.docs = doc_ids;
    std::map<std::string_view, int> column;
    for (const auto& [term, count] : df) {
        if (count < options.min_df) continue;
        if (static_cast<double>(count) > options.max_df_fraction * n_docs) continue;
        column.emplace(term, static_cast<int>(dtm.terms.size()));
        dtm.terms.push_back(term);
        dtm.doc_freq.push_back(count);
    }
    if (dtm.terms.empty()) {
        throw ConfigError("empty vocabulary after filtering with min_df=" + std::to_string(options.min_df) +
                          " and max_df_fraction=" + std::to_string(options.max_df_fraction));
    }

    std::vector<Eigen::Triplet<std::int32_t>> triplets;
    for (std::size_t d = 0; d < tokens.size(); ++d) {
        std::map<int, std::int32_t> row;
        for (const auto& t : tokens[d]) {
            if (auto it = column.find(t); it != column.end()) ++row[it->second];
        }
        for (const auto& [c, count] : row) triplets.emplace_back(static_cast<int>(d), c, count);
    }
    dtm.counts.resize(static_cast<Eigen::Index>(doc_ids.size()), static_cast<Eigen::Index>(dtm.terms.size()));
    dtm.counts.setFromTriplets(triplets.begin(), triplets.end());
    dtm.counts.makeCompressed();
    return dtm;
}

TfidfMatrix tfidf(const DocumentTermMatrix& dtm) {
    const double n_docs = static_cast<double>(dtm.num_docs());
    TfidfMatrix out;
    out.idf.resize(dtm.num_terms());
    for (std::size_t t = 0; t < dtm.num_terms(); ++t) {
        out.idf[t] = std::log(n_docs / static_cast<double>(dtm.doc_freq[t]));
    }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(dtm.counts.nonZeros()));
    for (Eigen::Index d = 0; d < dtm.counts.outerSize(); ++d) {
        const std::size_t first = triplets.size();
        double norm2 = 0.0;
        for (CountMatrix::InnerIterator it(dtm.counts, d); it; ++it) {
            const double v = static_cast<double>(it.value()) * out.idf[static_cast<std::size_t>(it.col())];
            if (v <= 0.0) continue;
            triplets.emplace_back(static_cast<int>(d), static_cast<int>(it.col()), v);
            norm2 += v * v;
        }
        if (norm2 > 0.0) {
            const double norm = std::sqrt(norm2);
            for (std::size_t i = first; i < triplets.size(); ++i) {
                triplets[i] = Eigen::Triplet<double>(triplets[i].row(), triplets[i].col(), triplets[i].value() / norm);
            }
        }
    }
    out.values.resize(dtm.counts.rows(), dtm.counts.cols());
    out.values.setFromTriplets(triplets.begin(), triplets.end());
    out.values.makeCompressed();
    return out;
}

}  // namespace feast
