#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "negkb/config.hpp"
#include "negkb/output.hpp"
#include "negkb/util.hpp"

using namespace negkb;

TEST_CASE("config defaults") {
    RunConfig c;
    CHECK(c.peering == PeeringMode::facet);
    CHECK(c.facet_property == "occupation");
    CHECK(c.s == 30);
    CHECK(c.k == 10);
    CHECK(c.alpha == 0.5);
    CHECK(c.subsumption_hops == 2);
    CHECK(c.norm_scope == NormScope::batch);
    CHECK(c.folds == 5);
    CHECK_FALSE(c.pca);
    auto opt = c.infer_options();
    CHECK(opt.s == 30);
    CHECK(opt.k == 10);
    CHECK(opt.noun == "people");
}

TEST_CASE("config file and overrides") {
    auto dir = fixtures::scratch_dir("cfg");
    {
        std::ofstream out(dir / "run.conf");
        out << "# run\n\n triples = data/triples.tsv \nk=3\ncombine=avg\nfilter=pca, subsumption\n"
               "alpha=0.25\npeering=embedding\nnorm_scope=entity\n";
    }
    auto c = load_config(dir / "run.conf");
    REQUIRE(c.triples);
    CHECK(*c.triples == dir / "data/triples.tsv");
    CHECK(c.k == 3);
    CHECK(c.combine == CombineMode::average);
    CHECK(c.pca);
    CHECK(c.subsumption);
    CHECK(c.alpha == 0.25);
    CHECK(c.peering == PeeringMode::embedding);
    CHECK(c.norm_scope == NormScope::entity);

    apply_setting(c, "k", "7");
    CHECK(c.k == 7);
    apply_setting(c, "filter", "none");
    CHECK_FALSE(c.pca);
    CHECK_FALSE(c.subsumption);
    apply_setting(c, "triples", "/abs/t.tsv", dir);
    CHECK(*c.triples == "/abs/t.tsv");
}

TEST_CASE("config rejects bad keys and values") {
    RunConfig c;
    CHECK_THROWS_AS(apply_setting(c, "colour", "red"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "k", "0"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "k", "ten"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "alpha", "1.5"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "filter", "pca,magic"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "subsumption_hops", "3"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "combine", "min"), InputError);
    CHECK_THROWS_AS(apply_setting(c, "folds", "1"), InputError);

    auto dir = fixtures::scratch_dir("cfg");
    {
        std::ofstream out(dir / "bad.conf");
        out << "k=3\njust words\n";
    }
    try {
        load_config(dir / "bad.conf");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config(dir / "missing.conf"), InputError);

    RunConfig p;
    p.triples = dir / "nope.tsv";
    CHECK_THROWS_AS(check_paths_exist(p), InputError);
}

TEST_CASE("every documented key is accepted") {
    const std::map<std::string, std::string> samples = {
        {"peering", "facet"}, {"combine", "max"}, {"normalize_by", "group_size"},
        {"filter", "pca"},    {"norm_scope", "batch"}, {"alpha", "0.5"},
        {"min_pop_ratio", "0.1"}, {"pivot_learning_rate", "0.1"}, {"subsumption_hops", "2"}};
    for (const auto& key : config_keys()) {
        RunConfig c;
        auto it = samples.find(key);
        const std::string value = it != samples.end() ? it->second : "3";
        INFO(key);
        CHECK_NOTHROW(apply_setting(c, key, value));
    }
}

TEST_CASE("statement ids") {
    auto kb = fixtures::einstein().build();
    const auto e = *kb.find_entity("Albert Einstein");
    const auto edu = *kb.find_property("educated at");
    const auto g = NegativeStatement::grounded(e, edu, *kb.find_entity("MIT"));
    const auto u = NegativeStatement::universal(e, edu);
    const auto c = NegativeStatement::conditional(e, edu, *kb.find_property("located in"),
                                                  *kb.find_entity("U.S."));
    CHECK(statement_id(kb, g) == "Albert Einstein|educated at|MIT");
    CHECK(statement_id(kb, u) == "Albert Einstein|educated at");
    CHECK(statement_id(kb, c) == "Albert Einstein|educated at|located in|U.S.");
    auto p = parse_statement_id("Albert Einstein|educated at|located in|U.S.");
    CHECK(p.kind == StatementKind::conditional);
    CHECK(p.aspect == "located in");
    CHECK(p.value == "U.S.");
    CHECK(parse_statement_id("a|b").kind == StatementKind::universal);
    CHECK(parse_statement_id("a|b|c").object == "c");
    CHECK_THROWS_AS(parse_statement_id("lonely"), InputError);
}

TEST_CASE("tables in tsv and json") {
    auto kb = fixtures::pitt().build();
    ScoredNegation g;
    g.stmt = NegativeStatement::grounded(*kb.find_entity("Brad Pitt"), *kb.find_property("award"),
                                         *kb.find_entity("Oscar for Best Actor"));
    g.score = 1.0;
    g.frq = 3;
    g.vol = 3;
    g.group = "occupation=actor";
    g.verbalization = "unlike 3 of 3 similar people";
    ScoredNegation u;
    u.stmt = NegativeStatement::universal(*kb.find_entity("Brad Pitt"), *kb.find_property("instagram"));
    u.score = 2.0 / 3.0;
    u.frq = 2;
    u.vol = 3;
    const std::vector<ScoredNegation> rows = {g, u};

    std::ostringstream tsv;
    write_table(tsv, negation_table(kb, rows), Format::tsv);
    std::istringstream lines(tsv.str());
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(header ==
          "subject\tkind\tproperty\tobject\tcondition_property\tcondition_value\tscore\tfrq\tvol\t"
          "group\tverbalization");
    CHECK(first ==
          "Brad Pitt\tgrounded\taward\tOscar for Best Actor\t\t\t1.000000\t3\t3\toccupation=actor\t"
          "unlike 3 of 3 similar people");
    CHECK(second == "Brad Pitt\tuniversal\tinstagram\t\t\t\t0.666667\t2\t3\t\t");

    std::ostringstream js;
    write_table(js, negation_table(kb, rows), Format::json);
    auto j = nlohmann::json::parse(js.str());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["object"] == "Oscar for Best Actor");
    CHECK(j[1]["object"].is_null());
    CHECK(j[1]["kind"] == "universal");
    CHECK(j[0]["frq"] == 3);

    std::ostringstream ord;
    u.prefix_len = 2;
    const std::vector<ScoredNegation> one = {u};
    write_table(ord, ordered_negation_table(kb, one, 0.5), Format::tsv);
    CHECK(ord.str().find("\tprefix_len\talpha\n") != std::string::npos);
    CHECK(ord.str().find("\t2\t0.500000\n") != std::string::npos);

    CHECK(parse_format("json") == Format::json);
    CHECK_THROWS_AS(parse_format("xml"), InputError);
}

TEST_CASE("conditional table") {
    auto kb = fixtures::einstein().build();
    ConditionalNegation c;
    c.subject = *kb.find_entity("Albert Einstein");
    c.property = *kb.find_property("educated at");
    c.aspect = *kb.find_property("located in");
    c.value = *kb.find_entity("U.S.");
    c.support = 3;
    c.negated = 3;
    const std::vector<ConditionalNegation> rows = {c};
    auto t = conditional_table(kb, rows);
    CHECK(t.columns.back() == "support");
    std::ostringstream out;
    write_table(out, t, Format::tsv);
    CHECK(out.str().find("Albert Einstein\tconditional\teducated at\t\tlocated in\tU.S.\t3.000000") !=
          std::string::npos);
    CHECK(verbalize_conditional(kb, c) == "no educated at value with located in U.S.");
}

TEST_CASE("format_real") {
    CHECK(format_real(0.76615157) == "0.766152");
    CHECK(format_real(-0.0) == "0.000000");
    CHECK(format_real(2) == "2.000000");
}

TEST_CASE("parallel_map keeps index order for any job count") {
    auto square = [](std::size_t i) { return static_cast<int>(i * i); };
    auto one = parallel_map<int>(1000, 1, square);
    for (std::size_t jobs : {2u, 3u, 8u, 64u}) CHECK(parallel_map<int>(1000, jobs, square) == one);
    CHECK(parallel_map<int>(0, 4, square).empty());
    CHECK_THROWS_AS(parallel_map<int>(10, 4,
                                      [](std::size_t i) -> int {
                                          if (i == 7) throw InputError("seven");
                                          return 0;
                                      }),
                    InputError);
}

TEST_CASE("derived seeds") {
    CHECK(derive_seed(42, "coverage") == derive_seed(42, "coverage"));
    CHECK(derive_seed(42, "coverage") != derive_seed(43, "coverage"));
    CHECK(derive_seed(42, "coverage") != derive_seed(42, "pivot"));
    CHECK(stable_hash("") == 1469598103934665603ULL);
}
