#include "goskills/dictionaries.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace goskills {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Normalizes a dictionary phrase key: lowercase words joined by single spaces.
std::string phrase_key(const std::string& entry) {
    std::vector<std::string> words = tokenize(entry);
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

std::string phrase_token(const std::string& key) {
    std::string out = key;
    for (char& c : out) {
        if (c == ' ') c = '-';
    }
    return out;
}

}  // namespace

std::pair<std::string, bool> Dictionaries::apply_alias(const std::string& token) const {
    auto it = aliases.find(token);
    if (it == aliases.end()) return {token, false};
    return {it->second, true};
}

bool Dictionaries::are_exclusive(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    auto p = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    return exclusive_pairs.count(p) > 0;
}

std::optional<FacetCategory> Dictionaries::category_of(const std::string& token) const {
    auto it = token_categories.find(token);
    if (it == token_categories.end()) return std::nullopt;
    return it->second;
}

Dictionaries parse_dictionaries(const std::string& alias_json,
                                const std::string& categories_json,
                                const std::string& exclusions_json) {
    Dictionaries d;
    d.raw_alias_json = alias_json;
    d.raw_categories_json = categories_json;
    d.raw_exclusions_json = exclusions_json;
    json alias = json::parse(alias_json);
    json cats = json::parse(categories_json);
    json excl = json::parse(exclusions_json);

    d.version = alias.at("version").get<std::string>() + "/" +
                cats.at("version").get<std::string>() + "/" +
                excl.at("version").get<std::string>();

    for (auto it = alias.at("aliases").begin(); it != alias.at("aliases").end(); ++it) {
        d.aliases[normalize_token(it.key())] = normalize_token(it.value().get<std::string>());
    }

    for (const auto& w : cats.at("stopwords")) {
        d.stopwords.insert(normalize_token(w.get<std::string>()));
    }
    for (const auto& w : cats.at("requirement_markers")) {
        d.requirement_markers.insert(normalize_token(w.get<std::string>()));
    }
    for (auto it = cats.at("categories").begin(); it != cats.at("categories").end(); ++it) {
        auto cat = facet_category_from_string(it.key());
        if (!cat) {
            throw std::runtime_error("unknown facet category in dictionary: " + it.key());
        }
        for (const auto& entry : it.value()) {
            std::string raw = entry.get<std::string>();
            if (raw.find(' ') != std::string::npos) {
                std::string key = phrase_key(raw);
                d.phrases[*cat][key] = phrase_token(key);
            } else {
                std::string tok = normalize_token(raw);
                auto existing = d.token_categories.find(tok);
                if (existing == d.token_categories.end() ||
                    static_cast<int>(*cat) < static_cast<int>(existing->second)) {
                    d.token_categories[tok] = *cat;
                }
            }
        }
    }

    for (const auto& pair : excl.at("exclusive_pairs")) {
        std::string a = normalize_token(pair.at(0).get<std::string>());
        std::string b = normalize_token(pair.at(1).get<std::string>());
        if (a.empty() || b.empty() || a == b) continue;
        if (b < a) std::swap(a, b);
        d.exclusive_pairs.insert({a, b});
    }
    return d;
}

Dictionaries default_dictionaries() {
    return parse_dictionaries(embedded_alias_json(), embedded_categories_json(),
                              embedded_exclusions_json());
}

Dictionaries load_dictionaries(const std::string& dir) {
    return parse_dictionaries(read_file(dir + "/alias.json"),
                              read_file(dir + "/categories.json"),
                              read_file(dir + "/exclusions.json"));
}

}  // namespace goskills
