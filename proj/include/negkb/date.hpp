#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace negkb {

// Calendar date with Wikidata-style precision. Missing month/day are 0.
// Ordering and equality use the earliest instant the date covers, so
// "2019" == "2019-01" == "2019-01-01".
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    int earliest_key() const {
        return year * 10000 + (month == 0 ? 1 : month) * 100 + (day == 0 ? 1 : day);
    }
    friend bool operator==(const Date& a, const Date& b) {
        return a.earliest_key() == b.earliest_key();
    }
    friend std::strong_ordering operator<=>(const Date& a, const Date& b) {
        return a.earliest_key() <=> b.earliest_key();
    }

    std::string to_string() const;
};

// Accepts YYYY, YYYY-MM, YYYY-MM-DD with an optional leading sign and an
// optional "T..." time suffix (ignored). Wikidata's "-00" month/day mean
// lower precision. Throws InputError on anything else.
Date parse_date(std::string_view text);

}  // namespace negkb
