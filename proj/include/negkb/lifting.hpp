#pragma once
// Lifting grounded negations ¬(e,p,o1..on) into conditional negations
// ¬∃o:(e,p,o),(o,aspect,value) scored by how many negated objects share
// the aspect value.

#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "negkb/statement.hpp"

namespace negkb {

// Property -> ordered aspect properties. Order decides ties.
class AspectConfig {
public:
    void add(PropertyId property, PropertyId aspect);
    const std::vector<PropertyId>* aspects(PropertyId property) const;
    bool empty() const { return aspects_.empty(); }
    const std::map<PropertyId, std::vector<PropertyId>>& all() const { return aspects_; }

    // aspects.tsv: property<TAB>aspect, one pair per line. Names not in the
    // KB are skipped and reported in `warnings`.
    static AspectConfig load(const std::filesystem::path& path, const KnowledgeBase& kb,
                             std::vector<std::string>* warnings = nullptr);

private:
    std::map<PropertyId, std::vector<PropertyId>> aspects_;
};

struct ConditionalNegation {
    EntityId subject;
    PropertyId property;
    PropertyId aspect;
    EntityId value;
    int support = 0;      // negated objects with (o, aspect, value)
    int negated = 0;      // grounded negations lifted for this property
    std::size_t aspect_rank = 0;

    NegativeStatement statement() const {
        return NegativeStatement::conditional(subject, property, aspect, value);
    }
};

struct LiftResult {
    std::vector<ConditionalNegation> conditionals;
    std::vector<std::string> notices;
};

// `grounded` must only hold grounded statements about e (InputError
// otherwise). Conditionals that e satisfies positively, i.e. some
// (e,p,o),(o,aspect,value) is in the KB, are removed. Ranked by support,
// then property, aspect order, value.
LiftResult lift(const KnowledgeBase& kb, EntityId e,
                const std::vector<NegativeStatement>& grounded, const AspectConfig& aspects,
                std::size_t k = std::numeric_limits<std::size_t>::max());

// before / after; +infinity when after is 0.
double compression_ratio(std::size_t before, std::size_t after);

struct AspectSuggestion {
    PropertyId property;
    PropertyId aspect;
    std::size_t distinct_values = 0;
    double coverage = 0.0;  // share of p's objects that have the aspect
};

// Candidate aspects for p over the objects of p, fewest distinct values
// first, then higher coverage.
std::vector<AspectSuggestion> suggest_aspects(const KnowledgeBase& kb, PropertyId property,
                                              std::size_t limit = 10);

}  // namespace negkb
