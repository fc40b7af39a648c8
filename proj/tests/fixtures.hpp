#pragma once
// Small hand-built knowledge bases shared by the unit, integration and
// acceptance tests. Each fixture is plain rows so oracles can recompute
// results without going through the KB indexes.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "negkb/kb.hpp"

namespace fixtures {

struct QualifierRow {
    std::string s, p, o, kind, date;
};

struct FixtureData {
    std::vector<std::array<std::string, 3>> triples;
    std::vector<QualifierRow> qualifiers;
    std::vector<std::pair<std::string, std::uint64_t>> popularity;
    std::vector<std::array<std::string, 3>> hierarchy;  // child, relation, parent
    std::vector<std::pair<std::string, std::string>> aspects;

    void add(std::string s, std::string p, std::string o) {
        triples.push_back({std::move(s), std::move(p), std::move(o)});
    }

    negkb::KnowledgeBase build() const;

    struct Files {
        std::filesystem::path triples, qualifiers, popularity, hierarchy, aspects;
    };
    // Writes every non-empty table as TSV into dir (created if needed).
    Files write(const std::filesystem::path& dir) const;
};

// Peer table for one subject and three actors: Crowe, Hanks, Washington.
// Placeholder values (children, handles, convictions) are literals.
FixtureData pitt();
// Same people, all with occupation actor, so facet grouping finds the
// three peers.
FixtureData pitt_actors();
// Nine lead-role winners, two per year 2015..2018, and Colman in 2019.
FixtureData colman();
// Einstein plus three physicists educated at MIT, Stanford and Harvard.
FixtureData einstein();
// Subject in two occupation groups of 10: 9 actors and 2 models are
// screenwriters.
FixtureData cross_group();
// 54 members of two oppositely dated award lists and 46 unrelated subjects.
FixtureData coverage();
// The Cossacks -> War and Peace -> Anna Karenina.
FixtureData tolstoy();
// Douglas Adams (writer under author) and company CEO (under employee).
FixtureData subsumption();

// Seeded random KB: at most 50 subject entities and 8 properties, with
// occupations, literals, popularity, hierarchy edges, point-in-time
// qualifiers and aspect triples for lifting.
FixtureData random_kb(std::uint64_t seed);

// Unique scratch directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

}  // namespace fixtures
