#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <stdexcept>

#include <unistd.h>

namespace fixtures {

using negkb::HierarchyRelation;
using negkb::QualifierKind;

negkb::KnowledgeBase FixtureData::build() const {
    negkb::KbBuilder b;
    for (const auto& t : triples) b.add_triple(t[0], t[1], t[2]);
    for (const auto& q : qualifiers) {
        const auto kind = q.kind == "start" ? QualifierKind::start
                          : q.kind == "end" ? QualifierKind::end
                                            : QualifierKind::point;
        b.add_qualifier(q.s, q.p, q.o, kind, negkb::parse_date(q.date));
    }
    for (const auto& [e, v] : popularity) b.set_popularity(e, v);
    for (const auto& h : hierarchy) {
        const auto rel = h[1] == "subclass"      ? HierarchyRelation::subclass
                         : h[1] == "subproperty" ? HierarchyRelation::subproperty
                                                 : HierarchyRelation::instance_of;
        b.add_hierarchy(h[0], rel, h[2]);
    }
    return b.build();
}

FixtureData::Files FixtureData::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    Files f;
    f.triples = dir / "triples.tsv";
    {
        std::ofstream out(f.triples);
        for (const auto& t : triples) out << t[0] << '\t' << t[1] << '\t' << t[2] << '\n';
    }
    if (!qualifiers.empty()) {
        f.qualifiers = dir / "qualifiers.tsv";
        std::ofstream out(f.qualifiers);
        for (const auto& q : qualifiers)
            out << q.s << '\t' << q.p << '\t' << q.o << '\t' << q.kind << '\t' << q.date << '\n';
    }
    if (!popularity.empty()) {
        f.popularity = dir / "popularity.tsv";
        std::ofstream out(f.popularity);
        for (const auto& [e, v] : popularity) out << e << '\t' << v << '\n';
    }
    if (!hierarchy.empty()) {
        f.hierarchy = dir / "hierarchy.tsv";
        std::ofstream out(f.hierarchy);
        for (const auto& h : hierarchy) out << h[0] << '\t' << h[1] << '\t' << h[2] << '\n';
    }
    if (!aspects.empty()) {
        f.aspects = dir / "aspects.tsv";
        std::ofstream out(f.aspects);
        for (const auto& [p, a] : aspects) out << p << '\t' << a << '\n';
    }
    return f;
}

FixtureData pitt() {
    FixtureData d;
    const std::string oscar = "Oscar for Best Actor";
    d.add("Russel Crowe", "award", oscar);
    d.add("Russel Crowe", "citizen", "New Zealand");
    d.add("Russel Crowe", "child", "\"y\"");
    d.add("Russel Crowe", "occupation", "screenwriter");
    d.add("Russel Crowe", "convicted", "\"v\"");
    d.add("Russel Crowe", "instagram", "\"t\"");
    d.add("Tom Hanks", "award", oscar);
    d.add("Tom Hanks", "citizen", "U.S.");
    d.add("Tom Hanks", "child", "\"z\"");
    d.add("Tom Hanks", "occupation", "screenwriter");
    d.add("Tom Hanks", "instagram", "\"r\"");
    d.add("Denzel Washington", "award", oscar);
    d.add("Denzel Washington", "citizen", "U.S.");
    d.add("Denzel Washington", "child", "\"u\"");
    d.add("Denzel Washington", "occupation", "screenwriter");
    d.add("Brad Pitt", "citizen", "U.S.");
    d.add("Brad Pitt", "child", "\"x\"");
    return d;
}

FixtureData pitt_actors() {
    FixtureData d = pitt();
    for (const char* who : {"Russel Crowe", "Tom Hanks", "Denzel Washington", "Brad Pitt"}) {
        d.add(who, "occupation", "actor");
        d.popularity.emplace_back(who, 1000);
    }
    return d;
}

FixtureData colman() {
    FixtureData d;
    const std::string award = "award received";
    const std::string oscar = "Academy Award for lead role";
    struct Winner {
        const char* name;
        const char* year;
        const char* citizen;
    };
    const Winner winners[] = {
        {"Julianne Moore", "2015", "U.S."},     {"Eddie Redmayne", "2015", "U.K."},
        {"Brie Larson", "2016", "U.S."},        {"Leonardo DiCaprio", "2016", "U.S."},
        {"Emma Stone", "2017", "U.S."},         {"Casey Affleck", "2017", "U.S."},
        {"Frances McDormand", "2018", "U.S."},  {"Gary Oldman", "2018", "U.K."},
        {"Olivia Colman", "2019", "U.K."},
    };
    for (const auto& w : winners) {
        d.add(w.name, award, oscar);
        d.add(w.name, "citizen of", w.citizen);
        d.add(w.name, "occupation", "actor");
        d.qualifiers.push_back({w.name, award, oscar, "point", w.year});
    }
    d.add("Casey Affleck", "occupation", "director");
    return d;
}

FixtureData einstein() {
    FixtureData d;
    d.add("Albert Einstein", "occupation", "physicist");
    d.add("Albert Einstein", "educated at", "ETH Zurich");
    d.add("Richard Feynman", "occupation", "physicist");
    d.add("Richard Feynman", "educated at", "MIT");
    d.add("Sally Ride", "occupation", "physicist");
    d.add("Sally Ride", "educated at", "Stanford");
    d.add("Robert Oppenheimer", "occupation", "physicist");
    d.add("Robert Oppenheimer", "educated at", "Harvard");

    d.add("ETH Zurich", "located in", "Switzerland");
    d.add("ETH Zurich", "instance of", "public university");
    d.add("MIT", "located in", "U.S.");
    d.add("MIT", "instance of", "institute of technology");
    d.add("MIT", "instance of", "private university");
    for (const char* u : {"Stanford", "Harvard"}) {
        d.add(u, "located in", "U.S.");
        d.add(u, "instance of", "research university");
        d.add(u, "instance of", "private university");
    }
    d.aspects = {{"educated at", "located in"}, {"educated at", "instance of"}};
    return d;
}

FixtureData cross_group() {
    FixtureData d;
    d.add("Brad Pitt", "occupation", "actor");
    d.add("Brad Pitt", "occupation", "model");
    char name[32];
    for (int i = 0; i < 10; ++i) {
        std::snprintf(name, sizeof name, "actor %d", i);
        d.add(name, "occupation", "actor");
        if (i < 9) d.add(name, "occupation", "screenwriter");
        std::snprintf(name, sizeof name, "model %d", i);
        d.add(name, "occupation", "model");
        if (i < 2) d.add(name, "occupation", "screenwriter");
    }
    return d;
}

FixtureData coverage() {
    FixtureData d;
    char name[32];
    char handle[32];
    char year[16];
    for (int i = 0; i < 54; ++i) {
        std::snprintf(name, sizeof name, "member %02d", i);
        std::snprintf(handle, sizeof handle, "handle %02d", i);
        d.add(name, "nickname", handle);
        d.add(name, "award", "Prize A");
        d.add(name, "award", "Prize B");
        std::snprintf(year, sizeof year, "%d", 1901 + i);
        d.qualifiers.push_back({name, "award", "Prize A", "point", year});
        std::snprintf(year, sizeof year, "%d", 2000 - i);
        d.qualifiers.push_back({name, "award", "Prize B", "point", year});
    }
    for (int i = 0; i < 46; ++i) {
        std::snprintf(name, sizeof name, "filler %02d", i);
        std::snprintf(handle, sizeof handle, "filler handle %02d", i);
        d.add(name, "nickname", handle);
    }
    return d;
}

FixtureData tolstoy() {
    FixtureData d;
    d.add("The Cossacks", "followed by", "War and Peace");
    d.add("War and Peace", "followed by", "Anna Karenina");
    d.add("The Cossacks", "author", "Leo Tolstoy");
    return d;
}

FixtureData subsumption() {
    FixtureData d;
    d.add("Douglas Adams", "occupation", "writer");
    d.add("Acme Corp", "CEO", "Jane Roe");
    d.hierarchy.push_back({"writer", "subclass", "author"});
    d.hierarchy.push_back({"CEO", "subproperty", "employee"});
    return d;
}

FixtureData random_kb(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    FixtureData d;
    const int n_subjects = uniform(5, 40);
    const int n_values = uniform(2, 10);
    const int n_data_props = uniform(1, 6);  // plus occupation and one aspect property
    char buf[32];
    std::vector<std::string> subjects, values, literals, props;
    for (int i = 0; i < n_subjects; ++i) {
        std::snprintf(buf, sizeof buf, "e%02d", i);
        subjects.emplace_back(buf);
    }
    for (int i = 0; i < n_values; ++i) {
        std::snprintf(buf, sizeof buf, "v%d", i);
        values.emplace_back(buf);
    }
    for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, "\"lit%d\"", i);
        literals.emplace_back(buf);
    }
    for (int i = 0; i < n_data_props; ++i) {
        std::snprintf(buf, sizeof buf, "p%d", i);
        props.emplace_back(buf);
    }
    const char* classes[] = {"c0", "c1", "c2", "c3"};

    for (const auto& s : subjects) {
        if (chance(0.9)) {
            d.add(s, "occupation", classes[uniform(0, 3)]);
            if (chance(0.3)) d.add(s, "occupation", classes[uniform(0, 3)]);
        }
        for (const auto& p : props) {
            if (!chance(0.4)) continue;
            const int n = uniform(1, 2);
            for (int j = 0; j < n; ++j) {
                const double r = std::uniform_real_distribution<double>(0, 1)(rng);
                if (r < 0.8) d.add(s, p, values[uniform(0, n_values - 1)]);
                else if (r < 0.9) d.add(s, p, literals[uniform(0, 2)]);
                else d.add(s, p, subjects[uniform(0, n_subjects - 1)]);
            }
        }
        if (chance(0.9)) d.popularity.emplace_back(s, static_cast<std::uint64_t>(uniform(0, 1000)));
    }
    // aspect values of the objects
    for (const auto& v : values) {
        const int n = uniform(0, 2);
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "w%d", uniform(0, 4));
            d.add(v, "a0", buf);
        }
        if (n_data_props > 1 && chance(0.5)) d.add(v, props[1], values[uniform(0, n_values - 1)]);
    }
    // dates on p0 statements form ordered lists
    for (const auto& t : d.triples) {
        if (t[1] == props[0] && t[2].front() != '"' && chance(0.7)) {
            std::snprintf(buf, sizeof buf, "%d", uniform(2000, 2010));
            d.qualifiers.push_back({t[0], t[1], t[2], "point", buf});
        }
    }
    for (int i = 0; i + 1 < n_values; ++i) {
        if (chance(0.3)) d.hierarchy.push_back({values[i], "subclass", values[uniform(i + 1, n_values - 1)]});
    }
    for (int i = 0; i + 1 < n_data_props; ++i) {
        if (chance(0.3)) d.hierarchy.push_back({props[i], "subproperty", props[uniform(i + 1, n_data_props - 1)]});
    }
    d.aspects.emplace_back(props[0], "a0");
    if (n_data_props > 1) d.aspects.emplace_back(props[0], props[1]);
    return d;
}

std::filesystem::path scratch_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("negkb-" + tag + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
