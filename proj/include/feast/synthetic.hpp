#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "feast/corpus.hpp"

namespace feast {

enum class Diet { meat, fish, vegetarian, vegan };

struct SyntheticCorpusOptions {
    std::size_t recipes = 1000;
    std::uint64_t seed = 42;
    // remaining share is vegetarian
    double meat_fraction = 0.40;
    double fish_fraction = 0.15;
    double vegan_fraction = 0.15;
};

struct SyntheticRecipe {
    RecipeDocument document;
    Diet diet = Diet::vegetarian;
};

/// Recipe corpus drawn from a fixed set of cuisines, each with its own
/// ingredients, tags and equipment. Meat and fish recipes always name their
/// protein as an ingredient word and carry a matching category tag; vegan
/// recipes contain no meat, fish, egg or dairy words. Deterministic per seed.
std::vector<SyntheticRecipe> generate_corpus(const SyntheticCorpusOptions& options);

std::vector<RecipeDocument> documents_of(const std::vector<SyntheticRecipe>& recipes);

/// Writes one JSON object per line (the canonical corpus format).
void write_jsonl(const std::vector<RecipeDocument>& docs, const std::filesystem::path& path);

}  // namespace feast
