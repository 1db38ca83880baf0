#pragma once

#include <array>
#include <string_view>

// Vocabulary groups behind the bundled food-practice definitions.
namespace feast::food_terms {

inline constexpr std::array<std::string_view, 18> meat = {
    "bacon",   "beef",     "chicken",  "chorizo",   "ham",        "lamb",
    "meat",    "meatball", "pepperoni", "pork",     "poultry",    "prosciutto",
    "sausage", "shredded-meat", "steak", "turkey", "veal", "ground-beef",
};

inline constexpr std::array<std::string_view, 12> fish = {
    "anchovy", "cod", "crab", "fish", "fish-sauce", "halibut",
    "prawn",   "salmon", "seafood", "shrimp", "tilapia", "tuna",
};

inline constexpr std::array<std::string_view, 3> egg = {"egg", "eggs", "mayonnaise"};

inline constexpr std::array<std::string_view, 13> dairy = {
    "butter", "cheddar", "cheese", "cream", "dairy", "feta", "ghee",
    "milk",   "mozzarella", "paneer", "parmesan", "ricotta", "yogurt",
};

}  // namespace feast::food_terms
