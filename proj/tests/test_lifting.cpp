#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "negkb/lifting.hpp"

using namespace negkb;

namespace {

AspectConfig aspects_of(const KnowledgeBase& kb, const fixtures::FixtureData& d) {
    AspectConfig asp;
    for (const auto& [p, a] : d.aspects) {
        auto pid = kb.find_property(p);
        auto aid = kb.find_property(a);
        if (pid && aid) asp.add(*pid, *aid);
    }
    return asp;
}

std::vector<NegativeStatement> not_educated_at(const KnowledgeBase& kb,
                                               std::initializer_list<const char*> schools) {
    std::vector<NegativeStatement> out;
    for (const char* s : schools)
        out.push_back(NegativeStatement::grounded(*kb.find_entity("Albert Einstein"),
                                                  *kb.find_property("educated at"),
                                                  *kb.find_entity(s)));
    return out;
}

std::string describe(const KnowledgeBase& kb, const ConditionalNegation& c) {
    return kb.name(c.property) + "|" + kb.name(c.aspect) + "|" + kb.name(c.value) + "|" +
           std::to_string(c.support);
}

}  // namespace

TEST_CASE("lifting the Einstein negations") {
    const auto data = fixtures::einstein();
    const auto kb = data.build();
    const auto asp = aspects_of(kb, data);
    const auto e = *kb.find_entity("Albert Einstein");
    const auto grounded = not_educated_at(kb, {"MIT", "Stanford", "Harvard"});

    auto top2 = lift(kb, e, grounded, asp, 2);
    REQUIRE(top2.conditionals.size() == 2);
    CHECK(describe(kb, top2.conditionals[0]) == "educated at|located in|U.S.|3");
    CHECK(describe(kb, top2.conditionals[1]) == "educated at|instance of|private university|3");
    CHECK(top2.conditionals[0].negated == 3);

    auto all = lift(kb, e, grounded, asp);
    REQUIRE(all.conditionals.size() == 4);
    CHECK(describe(kb, all.conditionals[2]) == "educated at|instance of|research university|2");
    CHECK(describe(kb, all.conditionals[3]) == "educated at|instance of|institute of technology|1");
    CHECK(statement_id(kb, all.conditionals[0].statement()) ==
          "Albert Einstein|educated at|located in|U.S.");
    CHECK(compression_ratio(grounded.size(), top2.conditionals.size()) == doctest::Approx(1.5));
}

TEST_CASE("lifting drops conditionals the subject satisfies") {
    auto data = fixtures::einstein();
    data.add("Albert Einstein", "educated at", "Princeton");
    data.add("Princeton", "located in", "U.S.");
    const auto kb = data.build();
    auto all = lift(kb, *kb.find_entity("Albert Einstein"),
                    not_educated_at(kb, {"MIT", "Stanford", "Harvard"}), aspects_of(kb, data));
    for (const auto& c : all.conditionals) CHECK(kb.name(c.value) != "U.S.");
    CHECK(all.conditionals.size() == 3);
}

TEST_CASE("lifting input checks and notices") {
    const auto data = fixtures::einstein();
    const auto kb = data.build();
    const auto e = *kb.find_entity("Albert Einstein");
    const auto asp = aspects_of(kb, data);
    CHECK_THROWS_AS(lift(kb, e, {NegativeStatement::universal(e, *kb.find_property("educated at"))}, asp),
                    InputError);
    CHECK_THROWS_AS(lift(kb, *kb.find_entity("MIT"), not_educated_at(kb, {"MIT"}), asp), InputError);
    CHECK_THROWS_AS(lift(kb, e, not_educated_at(kb, {"MIT"}), asp, 0), InputError);

    auto r = lift(kb, e, {NegativeStatement::grounded(e, *kb.find_property("occupation"),
                                                      *kb.find_entity("MIT"))},
                  asp);
    CHECK(r.conditionals.empty());
    REQUIRE(r.notices.size() == 1);
    CHECK(r.notices[0].find("occupation") != std::string::npos);
    CHECK(lift(kb, e, {}, asp).conditionals.empty());
}

TEST_CASE("compression ratio") {
    CHECK(compression_ratio(200, 33) == doctest::Approx(6.0606).epsilon(1e-4));
    CHECK(compression_ratio(10, 10) == 1.0);
    CHECK(std::isinf(compression_ratio(5, 0)));
}

TEST_CASE("aspect config file") {
    const auto data = fixtures::einstein();
    const auto kb = data.build();
    auto dir = fixtures::scratch_dir("asp");
    {
        std::ofstream out(dir / "a.tsv");
        out << "# property\taspect\neducated at\tinstance of\neducated at\tlocated in\n"
               "award received\tsubclass of\n";
    }
    std::vector<std::string> warnings;
    auto asp = AspectConfig::load(dir / "a.tsv", kb, &warnings);
    CHECK(warnings.size() == 1);
    const auto* list = asp.aspects(*kb.find_property("educated at"));
    REQUIRE(list);
    REQUIRE(list->size() == 2);
    CHECK(kb.name((*list)[0]) == "instance of");
    // config order decides ties
    auto r = lift(kb, *kb.find_entity("Albert Einstein"),
                  not_educated_at(kb, {"MIT", "Stanford", "Harvard"}), asp, 2);
    CHECK(kb.name(r.conditionals[0].aspect) == "instance of");
    {
        std::ofstream out(dir / "b.tsv");
        out << "educated at\n";
    }
    CHECK_THROWS_AS(AspectConfig::load(dir / "b.tsv", kb), InputError);
}

TEST_CASE("supports match the brute-force recount on random KBs") {
    for (std::uint64_t seed = 300; seed < 400; ++seed) {
        const auto data = fixtures::random_kb(seed);
        const auto kb = data.build();
        const auto asp = aspects_of(kb, data);
        std::mt19937_64 rng(seed);
        for (auto e : kb.subjects()) {
            // negate a random subset of the objects of p0 held by others
            std::map<std::string, std::vector<std::string>> negated;
            std::vector<NegativeStatement> grounded;
            const auto p0 = kb.find_property(data.aspects[0].first);
            if (!p0) break;
            for (const auto& t : kb.by_property(*p0)) {
                if (t.s == e || kb.contains({e, t.p, t.o}) || rng() % 2) continue;
                grounded.push_back(NegativeStatement::grounded(e, t.p, t.o));
                negated[kb.name(t.p)].push_back(kb.name(t.o));
            }
            auto got = lift(kb, e, grounded, asp);
            auto want = oracles::lift_supports(data, kb.name(e), negated, data.aspects);
            REQUIRE(got.conditionals.size() == want.size());
            std::set<EntityId> negated_objects;
            for (const auto& g : grounded) negated_objects.insert(g.object);
            for (std::size_t i = 0; i < got.conditionals.size(); ++i) {
                const auto& c = got.conditionals[i];
                const auto id = statement_id(kb, c.statement());
                REQUIRE(want.count(id));
                CHECK(c.support == want[id]);
                CHECK(c.support >= 1);
                CHECK(c.support <= c.negated);
                if (i > 0) CHECK(got.conditionals[i - 1].support >= c.support);
                // soundness: no positive object of e has the aspect value
                for (auto o : kb.objects(e, c.property)) CHECK_FALSE(kb.contains({o, c.aspect, c.value}));
                // support comes from negated objects only
                int from_negated = 0;
                for (auto o : negated_objects) from_negated += kb.contains({o, c.aspect, c.value});
                CHECK(from_negated == c.support);
            }
            if (!got.conditionals.empty()) {
                auto top1 = lift(kb, e, grounded, asp, 1);
                CHECK(top1.conditionals.size() == 1);
            }
        }
    }
}

TEST_CASE("aspect suggestions") {
    const auto kb = fixtures::einstein().build();
    auto s = suggest_aspects(kb, *kb.find_property("educated at"));
    REQUIRE(s.size() == 2);
    // located in: 2 values over 4 schools; instance of: 4 values
    CHECK(kb.name(s[0].aspect) == "located in");
    CHECK(s[0].distinct_values == 2);
    CHECK(s[0].coverage == doctest::Approx(1.0));
    CHECK(kb.name(s[1].aspect) == "instance of");
    CHECK(s[1].distinct_values == 4);
    CHECK(suggest_aspects(kb, *kb.find_property("educated at"), 1).size() == 1);
}
