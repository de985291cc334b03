#ifndef APERIODIC_LAB_CONFIG_HPP
#define APERIODIC_LAB_CONFIG_HPP

// Run configuration: exact number parsing and T grids.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aperiodic_lab/point_set.hpp"
#include "aperiodic_lab/qnum.hpp"

namespace aplab {

// Accepts "7", "-3/4", "2.125", "1e3" is rejected; "a b den" ring triples.
inline QNum parse_number(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    const std::string_view t = trim(text);
    const std::string shown(text);
    if (t.empty()) throw std::invalid_argument("empty number");
    if (t.find(' ') != std::string_view::npos) return QNum::parse(t);
    auto digits = [&](std::string_view s, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        }
        return true;
    };
    if (const auto slash = t.find('/'); slash != std::string_view::npos) {
        const auto num = t.substr(0, slash);
        const auto den = t.substr(slash + 1);
        if (!digits(num, true) || !digits(den, false)) throw std::invalid_argument("malformed rational: '" + shown + "'");
        const Integer d{std::string(den)};
        if (d == 0) throw std::invalid_argument("zero denominator: '" + shown + "'");
        return QNum::rational(Integer(std::string(num[0] == '+' ? num.substr(1) : num)), d);
    }
    if (const auto dot = t.find('.'); dot != std::string_view::npos) {
        std::string_view whole = t.substr(0, dot);
        const std::string_view frac = t.substr(dot + 1);
        bool neg = false;
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
            neg = whole[0] == '-';
            whole.remove_prefix(1);
        }
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !digits(whole, false)) ||
            (!frac.empty() && !digits(frac, false))) {
            throw std::invalid_argument("malformed decimal: '" + shown + "'");
        }
        Integer num = whole.empty() ? Integer(0) : Integer(std::string(whole));
        Integer den = 1;
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        return QNum::rational(neg ? Integer(-num) : num, den);
    }
    if (!digits(t, true)) throw std::invalid_argument("malformed number: '" + shown + "'");
    return QNum(Integer(std::string(t[0] == '+' ? t.substr(1) : t)));
}

// JSON numbers: integers stay exact; other numbers must be written as strings.
inline QNum number_from_json(const Json& j) {
    if (j.is_string()) return parse_number(j.get<std::string>());
    if (j.is_number_integer()) return QNum(static_cast<long long>(j.get<long long>()));
    throw std::invalid_argument("numbers must be integers or strings (\"p/q\", \"1.25\", \"a b den\")");
}

// [lo, hi] with the given step.
inline std::vector<QNum> make_grid(const QNum& lo, const QNum& hi, const QNum& step) {
    if (qsign(step) <= 0) throw std::invalid_argument("grid step must be positive");
    if (hi < lo) throw std::invalid_argument("grid upper end below lower end");
    std::vector<QNum> g;
    for (QNum t = lo; t <= hi; t += step) g.push_back(t);
    return g;
}

// Integers 2 .. floor(W / 4) in at most about 48 steps.
inline std::vector<QNum> default_grid(const QNum& W, std::size_t steps = 48) {
    const Integer hi = (W / QNum(4)).floor();
    if (hi < 2) throw std::invalid_argument("window too small for the default grid (needs W >= 8)");
    Integer step = (hi - 2 + Integer(steps) - 2) / Integer(steps - 1);
    if (step < 1) step = 1;
    return make_grid(QNum(2), QNum(hi), QNum(step));
}

// "2,4,8" or "lo:hi:step".
inline std::vector<QNum> parse_grid(std::string_view text) {
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (sep == ':') {
        if (parts.size() != 3) throw std::invalid_argument("grid range must be lo:hi:step");
        return make_grid(parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]));
    }
    std::vector<QNum> g;
    for (const auto& p : parts) g.push_back(parse_number(p));
    return g;
}

}  // namespace aplab

#endif  // APERIODIC_LAB_CONFIG_HPP
