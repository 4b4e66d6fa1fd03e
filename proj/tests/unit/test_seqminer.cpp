#include <doctest.h>

#include <random>

#include "ctxmine/seqminer.hpp"
#include "support/testdb.hpp"

using namespace ctxmine;
using testsupport::make_f1;
using testsupport::random_db;

namespace {

Context c_star() {
    Context c;
    c.predicates.emplace("student.age", "14-years");
    c.predicates.emplace("student.gender", "Male");
    c.predicates.emplace("curriculum.program", "Mathematics-grade-9");
    return c;
}

std::vector<Item> concrete_items(std::initializer_list<const char*> ids) {
    std::vector<Item> items;
    for (const char* id : ids) items.push_back(Item::concrete(id));
    return items;
}

bool contains(const std::vector<Pattern>& patterns, const Pattern& wanted) {
    return std::find(patterns.begin(), patterns.end(), wanted) != patterns.end();
}

}  // namespace

TEST_CASE("sequence_supports: gapped subsequence semantics") {
    auto db = make_f1();
    MiningParams params;
    const auto& s1 = db.sequences[0];  // s1: R-15 R-42 R-7
    REQUIRE(s1.student == "s1");

    CHECK(sequence_supports(s1, concrete_items({"R-15", "R-42"}), db, params));
    CHECK(sequence_supports(s1, concrete_items({"R-15", "R-7"}), db, params));
    CHECK_FALSE(sequence_supports(s1, concrete_items({"R-42", "R-15"}), db, params));

    std::vector<Item> with_gen = concrete_items({"R-15", "R-42"});
    with_gen.push_back(Item::generalized("resource.subject", "Mathematics"));
    CHECK(sequence_supports(s1, with_gen, db, params));

    const auto& s4 = db.sequences[3];  // s4: R-3
    CHECK_FALSE(sequence_supports(s4, concrete_items({"R-15"}), db, params));
}

TEST_CASE("sequence_supports: contiguous requires consecutive events") {
    auto db = make_f1();
    MiningParams params;
    params.gap = GapMode::Contiguous;
    const auto& s1 = db.sequences[0];  // R-15 R-42 R-7
    CHECK(sequence_supports(s1, concrete_items({"R-15", "R-42"}), db, params));
    CHECK(sequence_supports(s1, concrete_items({"R-42", "R-7"}), db, params));
    CHECK_FALSE(sequence_supports(s1, concrete_items({"R-15", "R-7"}), db, params));
}

TEST_CASE("count_support within the specific context") {
    auto db = make_f1();
    MiningParams params;
    auto cover = context_cover(c_star(), db);
    CHECK(count_support(cover, concrete_items({"R-15", "R-42"}), db, params) == 3);
    CHECK(count_support(cover, concrete_items({"R-15", "R-42", "R-7"}), db,
                        params) == 1);
    ContextCover empty_cover;
    CHECK(count_support(empty_cover, concrete_items({"R-15"}), db, params) == 0);
}

TEST_CASE("concrete extensions at the empty and matched prefix") {
    auto db = make_f1();
    MiningParams params;
    auto cover = context_cover(c_star(), db);
    auto proj = initial_projection(cover, db, params);

    auto level1 = frequent_concrete_extensions(proj, 2, db, params);
    REQUIRE(level1.size() == 2);
    CHECK(level1[0].first == Item::concrete("R-15"));
    CHECK(level1[0].second == 3);
    CHECK(level1[1].first == Item::concrete("R-42"));
    CHECK(level1[1].second == 3);

    auto after = project(project(proj, Item::concrete("R-15"), db, params),
                         Item::concrete("R-42"), db, params);
    CHECK(after.student_count() == 3);
    // R-7, R-9, R-11 each count 1: nothing frequent after R-15 R-42.
    CHECK(frequent_concrete_extensions(after, 2, db, params).empty());

    Projection empty_proj;
    CHECK(frequent_concrete_extensions(empty_proj, 1, db, params).empty());
}

TEST_CASE("generalized extensions step in where concrete ones fail") {
    auto db = make_f1();
    MiningParams params;
    auto cover = context_cover(c_star(), db);
    auto proj = initial_projection(cover, db, params);
    auto after = project(project(proj, Item::concrete("R-15"), db, params),
                         Item::concrete("R-42"), db, params);
    auto gens = frequent_generalized_extensions(after, 2, db, params, {});
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].first == Item::generalized("resource.subject", "Mathematics"));
    CHECK(gens[0].second == 3);
}

TEST_CASE("all-Unknown post-prefix resources never generalize") {
    auto db = testsupport::make_db(
        {{"s1", {{"ctx.k", {"a"}}}, {"R-u", "R-u"}, {}},
         {"s2", {{"ctx.k", {"a"}}}, {"R-u"}, {}}},
        {{"R-u", {{"resource.subject", ""}}}});
    MiningParams params;
    auto cover = context_cover(Context{}, db);
    auto proj = initial_projection(cover, db, params);
    CHECK(frequent_generalized_extensions(proj, 1, db, params, {}).empty());
}

TEST_CASE("mine reproduces the worked example pattern") {
    auto db = make_f1();
    MiningParams params;
    params.minsup_seq = 0.6;
    params.minsup_ctx = 2;
    params.max_context_size = 3;
    params.max_pattern_len = 4;

    auto patterns = mine(db, params);

    Pattern expected;
    expected.context = c_star();
    expected.items = concrete_items({"R-15", "R-42"});
    expected.items.push_back(Item::generalized("resource.subject", "Mathematics"));
    expected.cover = 3;
    expected.count = 3;
    CHECK(contains(patterns, expected));
    CHECK(expected.support() == doctest::Approx(1.0));

    // Globally, R-15 R-42 misses the ceiling(0.6 * 6) = 4 bar.
    Pattern global_pair;
    global_pair.items = concrete_items({"R-15", "R-42"});
    global_pair.cover = 6;
    global_pair.count = 3;
    CHECK_FALSE(contains(patterns, global_pair));

    // Fallback never fires where a concrete extension is frequent: no
    // single-item generalized pattern in the specific context.
    for (const auto& p : patterns)
        if (p.context == c_star() && p.items.size() == 1)
            CHECK(p.items[0].is_concrete());
}

TEST_CASE("empty database mines to nothing") {
    SequenceDatabase db;
    MiningParams params;
    CHECK(mine(db, params).empty());
}

TEST_CASE("emitted counts are confirmed by full rescan") {
    std::mt19937_64 rng(7151);
    MiningParams params;
    params.minsup_ctx = 1;
    params.minsup_seq = 0.5;
    params.max_context_size = 2;
    params.max_pattern_len = 3;
    for (int round = 0; round < 40; ++round) {
        auto db = random_db(rng);
        params.generalization = round % 2 ? GeneralizationMode::Always
                                          : GeneralizationMode::Fallback;
        params.gap = round % 3 ? GapMode::Gapped : GapMode::Contiguous;
        for (const auto& p : mine(db, params)) {
            auto cover = context_cover(p.context, db);
            CHECK(cover.students.size() == p.cover);
            CHECK(count_support(cover, p.items, db, params) == p.count);
            CHECK(p.count >= params.threshold(p.cover));
        }
    }
}

TEST_CASE("prefix and context monotonicity, generalization dominance") {
    std::mt19937_64 rng(90125);
    MiningParams params;
    params.minsup_ctx = 1;
    params.minsup_seq = 0.4;
    params.max_context_size = 2;
    params.max_pattern_len = 3;
    for (int round = 0; round < 25; ++round) {
        auto db = random_db(rng);
        auto patterns = mine(db, params);
        for (const auto& p : patterns) {
            auto cover = context_cover(p.context, db);
            // Prefix anti-monotonicity against every observed concrete item.
            std::set<std::string> alphabet;
            for (const auto& seq : db.sequences)
                for (const auto& e : seq.events) alphabet.insert(e.resource);
            for (const auto& r : alphabet) {
                auto extended = p.items;
                extended.push_back(Item::concrete(r));
                CHECK(count_support(cover, extended, db, params) <= p.count);
            }
            // Context monotonicity: dropping one predicate never shrinks count.
            for (const auto& [key, value] : p.context.predicates) {
                Context general = p.context;
                general.predicates.erase(key);
                auto gcover = context_cover(general, db);
                CHECK(count_support(gcover, p.items, db, params) >= p.count);
            }
            // Generalization dominance on a generalized final item.
            if (!p.items.empty() && !p.items.back().is_concrete()) {
                const Item& gen = p.items.back();
                for (const auto& [rid, attrs] : db.resource_attrs) {
                    auto it = attrs.attrs.find(gen.attribute);
                    if (it == attrs.attrs.end() || !it->second ||
                        *it->second != gen.value)
                        continue;
                    auto concrete_version = p.items;
                    concrete_version.back() = Item::concrete(rid);
                    CHECK(count_support(cover, concrete_version, db, params) <=
                          p.count);
                }
            }
        }
    }
}

TEST_CASE("output is identical across worker counts") {
    auto db = make_f1();
    MiningParams params;
    params.minsup_seq = 0.6;
    params.minsup_ctx = 2;
    auto one = mine(db, params);
    params.workers = 4;
    auto four = mine(db, params);
    CHECK(one == four);
}

TEST_CASE("most-general dedup drops cover-preserving specializations") {
    auto db = make_f1();
    MiningParams params;
    params.minsup_seq = 0.6;
    params.minsup_ctx = 2;
    params.dedup = ContextDedup::MostGeneral;
    auto contexts = frequent_contexts(db, params);
    // In F1 every single predicate pins the same 3-student group, so only
    // the global context and the three size-1 contexts per group survive.
    for (const auto& c : contexts) CHECK(c.context.size() <= 1);
    params.dedup = ContextDedup::None;
    CHECK(frequent_contexts(db, params).size() > contexts.size());
}

TEST_CASE("action mode splits items by action") {
    auto db = testsupport::make_db(
        {{"s1", {}, {"R-1", "R-1"}, {"view", "post"}},
         {"s2", {}, {"R-1"}, {"view"}}},
        {{"R-1", {{"resource.subject", "Mathematics"}}}});
    MiningParams params;
    params.minsup_ctx = 1;
    params.minsup_seq = 1.0;
    params.action_mode = true;
    params.generalization = GeneralizationMode::Off;
    auto patterns = mine(db, params);
    Pattern viewed;
    viewed.items = {Item::concrete("R-1", "view")};
    viewed.cover = 2;
    viewed.count = 2;
    CHECK(contains(patterns, viewed));
    Pattern posted;
    posted.items = {Item::concrete("R-1", "post")};
    posted.cover = 2;
    posted.count = 2;
    CHECK_FALSE(contains(patterns, posted));  // only s1 posted
}
