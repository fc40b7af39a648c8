#include "negkb/date.hpp"

#include <charconv>
#include <cstdio>

#include "negkb/kb.hpp"

namespace negkb {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

[[noreturn]] void bad_date(std::string_view text) {
    throw InputError("unknown date format: '" + std::string(text) + "'");
}

}  // namespace

Date parse_date(std::string_view text) {
    const std::string_view original = text;
    if (auto t = text.find('T'); t != std::string_view::npos) text = text.substr(0, t);

    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    Date d;
    const auto dash1 = text.find('-');
    if (!parse_int(text.substr(0, dash1), d.year)) bad_date(original);
    if (negative) d.year = -d.year;
    if (dash1 != std::string_view::npos) {
        auto rest = text.substr(dash1 + 1);
        const auto dash2 = rest.find('-');
        if (!parse_int(rest.substr(0, dash2), d.month)) bad_date(original);
        if (dash2 != std::string_view::npos && !parse_int(rest.substr(dash2 + 1), d.day))
            bad_date(original);
    }
    if (d.month < 0 || d.month > 12 || d.day < 0 || d.day > 31) bad_date(original);
    if (d.month == 0 && d.day != 0) bad_date(original);
    return d;
}

std::string Date::to_string() const {
    char buf[32];
    if (month == 0)
        std::snprintf(buf, sizeof buf, "%04d", year);
    else if (day == 0)
        std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    else
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

}  // namespace negkb
