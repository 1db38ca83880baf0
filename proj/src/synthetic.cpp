#include "feast/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

#include "feast/error.hpp"

namespace feast {

namespace {

using Words = std::vector<std::string_view>;

struct Cuisine {
    std::string_view name;
    Words produce;     // vegan-safe ingredient words
    Words dairy;
    Words meat;
    Words fish;
    Words categories;
    Words equipment;
    double sugar_bias;  // g/100g added to the sugar draw
    double salt_bias;
};

const std::vector<Cuisine>& cuisines() {
    static const std::vector<Cuisine> table = {
        {"italian", {"basil", "oregano", "garlic", "tomato", "olive", "spaghetti", "zucchini", "eggplant", "arborio", "pine-nut"},
         {"parmesan", "mozzarella", "ricotta"}, {"sausage", "prosciutto", "beef", "meatball"}, {"anchovy", "shrimp"},
         {"lasagna", "risotto", "pasta", "pizza"}, {"saucepan", "baking-dish"}, 2.0, 0.9},
        {"tex-mex", {"cumin", "jalapeno", "tortilla", "avocado", "cilantro", "lime", "corn", "black-bean", "salsa", "paprika"},
         {"cheddar", "cream"}, {"beef", "chicken", "chorizo", "ground-beef"}, {"tilapia", "shrimp"},
         {"tacos", "burrito", "enchilada", "quesadilla"}, {"skillet", "grill"}, 2.0, 1.2},
        {"indian", {"curry", "turmeric", "coriander", "ginger", "lentil", "chickpea", "garam-masala", "cardamom", "spinach", "basmati"},
         {"paneer", "ghee", "yogurt"}, {"chicken", "lamb"}, {"prawn", "cod"},
         {"dal", "biryani", "masala", "korma"}, {"saucepan", "tandoor"}, 3.0, 0.8},
        {"chinese", {"soy", "ginger", "scallion", "sesame", "bok-choy", "noodle", "hoisin", "star-anise", "tofu", "mushroom"},
         {}, {"pork", "chicken", "beef"}, {"shrimp", "crab"},
         {"stir-fry", "dumpling", "noodle-soup", "fried-rice"}, {"wok", "steamer"}, 4.0, 1.6},
        {"thai", {"coconut", "lemongrass", "lime", "peanut", "rice-noodle", "chili", "galangal", "kaffir", "cilantro", "basil"},
         {}, {"chicken", "pork"}, {"fish-sauce", "prawn", "shrimp"},
         {"green-curry", "pad-thai", "tom-yum", "salad"}, {"wok", "mortar"}, 5.0, 1.3},
        {"french", {"shallot", "thyme", "wine", "mushroom", "tarragon", "dijon", "leek", "potato", "herbes", "garlic"},
         {"butter", "cream", "cheese"}, {"beef", "bacon", "chicken", "veal"}, {"cod", "salmon"},
         {"stew", "quiche", "gratin", "soup"}, {"dutch-oven", "casserole-dish"}, 2.0, 0.9},
        {"american", {"ketchup", "mustard", "potato", "onion", "pickle", "barbecue", "bun", "corn", "coleslaw", "bean"},
         {"cheddar", "butter", "milk"}, {"beef", "pork", "bacon", "turkey", "steak"}, {"tuna", "salmon"},
         {"burger", "casserole", "pot-roast", "sandwich"}, {"grill", "slow-cooker"}, 6.0, 1.8},
        {"greek", {"olive", "lemon", "oregano", "cucumber", "dill", "pita", "chickpea", "mint", "tomato", "eggplant"},
         {"feta", "yogurt"}, {"lamb", "chicken"}, {"halibut", "anchovy"},
         {"souvlaki", "moussaka", "salad", "mezze"}, {"grill", "baking-dish"}, 2.0, 1.1},
        {"baking", {"flour", "sugar", "vanilla", "cinnamon", "oat", "granola", "maple", "banana", "blueberry", "honey"},
         {"butter", "milk", "cream"}, {"bacon", "ham"}, {"salmon"},
         {"muffin", "pancake", "cake", "cookie"}, {"oven", "muffin-tin"}, 22.0, 0.5},
        {"hawaiian", {"pineapple", "coconut", "macadamia", "teriyaki", "mango", "rice", "papaya", "ginger", "scallion", "sesame"},
         {"butter"}, {"ham", "pork", "chicken"}, {"tuna", "salmon"},
         {"poke", "luau", "kebab", "smoothy"}, {"grill", "blender"}, 10.0, 1.4},
    };
    return table;
}

constexpr std::array<std::string_view, 7> kContexts = {
    "holiday-food", "beginner-cook", "week-night", "inexpensive", "6-people-or-more", "potluck", "kid-friendly"};
constexpr std::array<std::string_view, 5> kVeganProtein = {"tofu", "lentil", "chickpea", "tempeh", "bean"};
constexpr std::array<std::string_view, 8> kCrossPantry = {
    "carrot", "cauliflower", "broccoli", "celery", "wheat", "vegetable", "peanut-butter", "quinoa"};
constexpr std::array<std::string_view, 6> kAdjectives = {"Easy", "Classic", "Spicy", "Quick", "Rustic", "Family"};

std::string_view meat_tag(std::string_view meat) {
    if (meat == "chicken" || meat == "turkey") return "poultry";
    if (meat == "sausage" || meat == "meatball" || meat == "chorizo" || meat == "ground-beef") return "shredded-meat";
    return "meat";
}

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    template <typename Range>
    std::string_view pick(const Range& r) {
        return r[index(std::size(r))];
    }

    /// Up to `count` distinct elements, in draw order.
    template <typename Range>
    std::vector<std::string_view> sample(const Range& r, std::size_t count) {
        std::vector<std::string_view> pool(std::begin(r), std::end(r));
        std::vector<std::string_view> out;
        count = std::min(count, pool.size());
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + index(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 rng_;
};

std::string capitalize(std::string_view w) {
    std::string s(w);
    for (auto& c : s) {
        if (c == '-') c = ' ';
    }
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

Diet draw_diet(Draw& draw, const SyntheticCorpusOptions& o) {
    const double u = draw.uniform(0.0, 1.0);
    if (u < o.meat_fraction) return Diet::meat;
    if (u < o.meat_fraction + o.fish_fraction) return Diet::fish;
    if (u < o.meat_fraction + o.fish_fraction + o.vegan_fraction) return Diet::vegan;
    return Diet::vegetarian;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

SyntheticRecipe make_recipe(Draw& draw, std::size_t index, const SyntheticCorpusOptions& options) {
    const Cuisine& c = cuisines()[draw.index(cuisines().size())];
    SyntheticRecipe out;
    out.diet = draw_diet(draw, options);
    RecipeDocument& doc = out.document;
    doc.id = "r" + std::to_string(index + 1);

    std::vector<std::string_view> ingredients = draw.sample(c.produce, 3 + draw.index(3));
    if (draw.chance(0.35)) ingredients.push_back(draw.pick(kCrossPantry));

    std::vector<std::string_view> tags = {c.name};
    std::string_view main = ingredients.front();
    bool has_egg = false;
    bool has_dairy = false;

    switch (out.diet) {
        case Diet::meat: {
            const auto meats = draw.sample(c.meat, 1 + draw.index(2));
            ingredients.insert(ingredients.begin(), meats.begin(), meats.end());
            main = meats.front();
            tags.push_back(meat_tag(meats.front()));
            break;
        }
        case Diet::fish: {
            const auto fish = draw.pick(c.fish);
            ingredients.insert(ingredients.begin(), fish);
            main = fish;
            tags.push_back("seafood");
            break;
        }
        case Diet::vegan: {
            const auto protein = draw.pick(kVeganProtein);
            ingredients.insert(ingredients.begin(), protein);
            main = protein;
            tags.push_back("vegan");
            tags.push_back("egg-free");
            break;
        }
        case Diet::vegetarian: {
            tags.push_back("vegetarian");
            if (draw.chance(0.4)) {
                ingredients.insert(ingredients.begin(), draw.pick(kVeganProtein));
                main = ingredients.front();
            }
            break;
        }
    }
    if (out.diet != Diet::vegan) {
        if (!c.dairy.empty() && draw.chance(0.5)) {
            ingredients.push_back(draw.pick(c.dairy));
            has_dairy = true;
        }
        if (draw.chance(c.name == "baking" ? 0.7 : 0.15)) {
            ingredients.push_back("eggs");
            has_egg = true;
        }
    }
    if (!has_egg && out.diet != Diet::vegan && draw.chance(0.3)) tags.push_back("egg-free");

    const std::string_view category = draw.pick(c.categories);
    tags.push_back(category);
    const std::string_view equipment = draw.pick(c.equipment);
    tags.push_back(equipment);
    for (auto ctx : draw.sample(kContexts, draw.index(3))) tags.push_back(ctx);

    const int cook_minutes = static_cast<int>(10 + draw.index(c.name == "french" || c.name == "american" ? 290 : 110));
    const bool few_steps = draw.chance(0.4);
    tags.push_back(cook_minutes < 60 ? "less-than-one-hour" : (cook_minutes >= 240 ? "4-hours-or-more" : "slow-cooked"));
    if (few_steps) tags.push_back("few-steps-recipe");
    if (draw.chance(0.2)) tags.push_back(draw.chance(0.5) ? "fried" : "marinated");

    // nutrition per 100 g
    NutritionFacts n;
    const double fat_base = out.diet == Diet::meat ? 12.0 : out.diet == Diet::fish ? 7.0
                          : out.diet == Diet::vegan ? 3.5 : 8.0;
    n.fat_g = round2(std::max(0.1, fat_base * draw.uniform(0.2, 2.0) + (has_dairy ? 4.0 : 0.0)));
    n.saturates_g = round2(n.fat_g * draw.uniform(0.1, has_dairy ? 0.65 : 0.4));
    n.sugar_g = round2(std::max(0.0, c.sugar_bias * draw.uniform(0.3, 1.8) + draw.uniform(0.0, 4.0)));
    n.salt_g = round2(std::max(0.01, c.salt_bias * draw.uniform(0.1, 1.6)));
    n.calories_kcal = std::round(9.0 * n.fat_g + 4.0 * n.sugar_g + draw.uniform(40.0, 160.0));
    doc.nutrition = n;
    if (n.fat_g <= 3.0 && out.diet != Diet::meat) tags.push_back("low-cholesterol");
    if (has_dairy) tags.push_back("high-calcium");

    doc.title = std::string(draw.pick(kAdjectives)) + " " + capitalize(c.name) + " " + capitalize(main) +
                " " + capitalize(category);

    for (auto ing : ingredients) {
        doc.ingredients.push_back(std::to_string(1 + draw.index(4)) + " cups chopped " + std::string(ing));
    }

    const auto& first = ingredients.front();
    const auto& second = ingredients[std::min<std::size_t>(1, ingredients.size() - 1)];
    doc.instructions.push_back("Chop the " + std::string(first) + " and " + std::string(second) + ".");
    if (!few_steps) {
        doc.instructions.push_back("Heat oil in the " + capitalize(equipment) + " and saute the aromatics.");
        doc.instructions.push_back("Simmer gently for " + std::to_string(cook_minutes) + " minutes, stirring.");
    }
    doc.instructions.push_back("Season with salt and pepper and serve warm.");

    doc.tags.reserve(tags.size());
    for (auto t : tags) doc.tags.emplace_back(t);
    doc.servings = static_cast<int>(1 + draw.index(12));
    doc.cook_minutes = cook_minutes;
    doc.image_present = draw.chance(0.8);
    return out;
}

}  // namespace

std::vector<SyntheticRecipe> generate_corpus(const SyntheticCorpusOptions& options) {
    if (options.meat_fraction < 0 || options.fish_fraction < 0 || options.vegan_fraction < 0 ||
        options.meat_fraction + options.fish_fraction + options.vegan_fraction > 1.0) {
        throw ParameterError("diet fractions must be non-negative and sum to at most 1");
    }
    Draw draw(options.seed);
    std::vector<SyntheticRecipe> out;
    out.reserve(options.recipes);
    for (std::size_t i = 0; i < options.recipes; ++i) out.push_back(make_recipe(draw, i, options));
    return out;
}

std::vector<RecipeDocument> documents_of(const std::vector<SyntheticRecipe>& recipes) {
    std::vector<RecipeDocument> docs;
    docs.reserve(recipes.size());
    for (const auto& r : recipes) docs.push_back(r.document);
    return docs;
}

void write_jsonl(const std::vector<RecipeDocument>& docs, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& doc : docs) out << nlohmann::json(doc).dump() << '\n';
    if (!out) throw IoError("error while writing " + path.string());
}

}  // namespace feast
