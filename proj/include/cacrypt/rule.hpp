#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cacrypt {

// A Life-Like rule: which 8-neighbor counts make a dead cell come alive
// (birth) and which keep a live cell alive (survival). Counts are 0..8,
// stored one bit per count. Equality is set equality; the name is a label.
class Rule {
public:
    Rule() = default;

    Rule(std::uint16_t birth_mask, std::uint16_t survival_mask, std::string name = {})
        : birth_(birth_mask), survival_(survival_mask), name_(std::move(name)) {
        if (birth_ > 0x1FF || survival_ > 0x1FF)
            throw std::invalid_argument("Rule: neighbor counts are limited to 0..8");
    }

    bool births(int count) const { return (birth_ >> count) & 1u; }
    bool survives(int count) const { return (survival_ >> count) & 1u; }

    std::uint16_t birth_mask() const { return birth_; }
    std::uint16_t survival_mask() const { return survival_; }

    const std::string& name() const { return name_; }

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.birth_ == b.birth_ && a.survival_ == b.survival_;
    }

private:
    std::uint16_t birth_ = 0;
    std::uint16_t survival_ = 0;
    std::string name_;
};

// Parses Golly-style B/S notation ("B3/S23"). The separator may be '/' or
// '\' and the B/S letters are case-insensitive; digits must be 0..8 with no
// repeats. Throws std::invalid_argument on malformed input.
inline Rule parse_rule(std::string_view text, std::string name = {}) {
    const auto sep = text.find_first_of("/\\");
    if (sep == std::string_view::npos)
        throw std::invalid_argument("rule: missing '/' separator in \"" + std::string(text) + "\"");

    const auto digits_of = [&](std::string_view part, char letter) -> std::uint16_t {
        if (part.empty() || (part.front() != letter && part.front() != (letter ^ 0x20)))
            throw std::invalid_argument(std::string("rule: expected '") + letter + "' token");
        std::uint16_t mask = 0;
        for (char ch : part.substr(1)) {
            if (ch < '0' || ch > '8') {
                if (ch == '9')
                    throw std::invalid_argument("rule: neighbor count 9 is out of range (max 8)");
                throw std::invalid_argument(std::string("rule: unexpected character '") + ch + "'");
            }
            const std::uint16_t bit = std::uint16_t(1) << (ch - '0');
            if (mask & bit)
                throw std::invalid_argument(std::string("rule: repeated digit '") + ch + "'");
            mask |= bit;
        }
        return mask;
    };

    const std::uint16_t birth = digits_of(text.substr(0, sep), 'B');
    const std::uint16_t survival = digits_of(text.substr(sep + 1), 'S');
    return Rule(birth, survival, std::move(name));
}

// Canonical notation: ascending digits, '/' separator.
inline std::string format_rule(const Rule& rule) {
    std::string out = "B";
    for (int k = 0; k <= 8; ++k)
        if (rule.births(k)) out += char('0' + k);
    out += "/S";
    for (int k = 0; k <= 8; ++k)
        if (rule.survives(k)) out += char('0' + k);
    return out;
}

// The built-in named rules, in a fixed order. Names are unique and every
// entry round-trips through parse/format.
inline std::vector<Rule> catalog() {
    static const std::pair<const char*, const char*> entries[] = {
        {"Life", "B3/S23"},
        {"HighLife", "B36/S23"},
        {"B23/S36", "B23/S36"},
        {"Fredkin", "B1357/S02468"},
        {"Amoeba", "B357/S1358"},
        {"Seeds", "B2/S"},
        {"Replicator", "B1357/S1357"},
        {"Day&Night", "B3678/S34678"},
        {"2x2", "B36/S125"},
        {"Diamoeba", "B35678/S5678"},
        {"Coral", "B3/S45678"},
        {"Anneal", "B4678/S35678"},
    };
    std::vector<Rule> rules;
    rules.reserve(std::size(entries));
    for (const auto& [name, notation] : entries)
        rules.push_back(parse_rule(notation, name));
    return rules;
}

} // namespace cacrypt
