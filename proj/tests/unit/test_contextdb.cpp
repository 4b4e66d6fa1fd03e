#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ctxmine/contextdb.hpp"

using namespace ctxmine;

namespace {

SourceDescriptor descriptor(std::string name, SourceRole role,
                            std::optional<std::string> key,
                            std::vector<std::string> columns) {
    SourceDescriptor d;
    d.name = std::move(name);
    d.role = role;
    d.path = "<memory>";
    d.key_column = std::move(key);
    d.columns = std::move(columns);
    return d;
}

SourceTable table_from(const SourceDescriptor& d, const std::string& text) {
    std::istringstream in(text);
    return parse_table(d, in);
}

// The standard 4-source star used across these tests.
SchemaModel star_schema(std::vector<std::string> student_cols =
                            {"student_id", "age", "gender", "curriculum_id"}) {
    SchemaModel m;
    m.sources.push_back(descriptor(
        "activity", SourceRole::Core, std::nullopt,
        {"student_id", "resource_id", "timestamp", "action"}));
    m.sources.push_back(descriptor("student", SourceRole::Refining, "student_id",
                                   std::move(student_cols)));
    m.sources.push_back(descriptor("curriculum", SourceRole::Refining,
                                   "curriculum_id", {"curriculum_id", "program"}));
    m.sources.push_back(descriptor("resource", SourceRole::Generalizing,
                                   "resource_id", {"resource_id", "subject"}));
    m.links.push_back({"activity", "student", "student_id", LinkKind::SourceToSource});
    m.links.push_back({"student", "curriculum", "curriculum_id", LinkKind::SourceToSource});
    m.links.push_back({"activity", "resource", "resource_id", LinkKind::ElementToSource});
    return m;
}

std::map<std::string, SourceTable> star_tables(
    const SchemaModel& schema, const std::string& activity,
    const std::string& students, const std::string& curricula,
    const std::string& resources) {
    std::map<std::string, SourceTable> tables;
    tables.emplace("activity", table_from(*schema.find_source("activity"), activity));
    tables.emplace("student", table_from(*schema.find_source("student"), students));
    tables.emplace("curriculum", table_from(*schema.find_source("curriculum"), curricula));
    tables.emplace("resource", table_from(*schema.find_source("resource"), resources));
    return tables;
}

}  // namespace

TEST_CASE("events group per student in timestamp order") {
    auto schema = star_schema();
    auto activity = table_from(*schema.find_source("activity"),
                               "student_id,resource_id,timestamp,action\n"
                               "s1,R-15,10,view\n"
                               "s1,R-42,20,view\n");
    auto sequences = build_sequences(activity);
    REQUIRE(sequences.size() == 1);
    CHECK(sequences[0].student == "s1");
    REQUIRE(sequences[0].events.size() == 2);
    CHECK(sequences[0].events[0].resource == "R-15");
    CHECK(sequences[0].events[1].resource == "R-42");
}

TEST_CASE("empty activity gives an empty database") {
    auto schema = star_schema();
    auto activity = table_from(*schema.find_source("activity"),
                               "student_id,resource_id,timestamp,action\n");
    CHECK(build_sequences(activity).empty());
}

TEST_CASE("equal timestamps break ties by file order") {
    auto schema = star_schema();
    auto activity = table_from(*schema.find_source("activity"),
                               "student_id,resource_id,timestamp,action\n"
                               "s2,R-9,5,view\n"
                               "s1,R-3,10,view\n"
                               "s1,R-2,10,view\n");
    auto sequences = build_sequences(activity);
    REQUIRE(sequences.size() == 2);
    // Sorted by student id; s1's equal-timestamp events keep file order.
    CHECK(sequences[0].student == "s1");
    CHECK(sequences[0].events[0].resource == "R-3");
    CHECK(sequences[0].events[1].resource == "R-2");

    // Naive stable-sort oracle over (timestamp only).
    std::vector<Event> expected = sequences[0].events;
    std::stable_sort(expected.begin(), expected.end(),
                     [](const Event& a, const Event& b) {
                         return a.timestamp < b.timestamp;
                     });
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(expected[i].resource == sequences[0].events[i].resource);
}

TEST_CASE("duplicate activity rows are kept") {
    auto schema = star_schema();
    auto activity = table_from(*schema.find_source("activity"),
                               "student_id,resource_id,timestamp,action\n"
                               "s1,R-1,10,view\n"
                               "s1,R-1,10,view\n");
    CHECK(build_sequences(activity)[0].events.size() == 2);
}

TEST_CASE("context attaches through the refining chain") {
    auto schema = star_schema();
    auto tables = star_tables(schema,
                              "student_id,resource_id,timestamp,action\n"
                              "s1,R-15,10,view\n",
                              "student_id,age,gender,curriculum_id\n"
                              "s1,14-years,Male,C-9\n",
                              "curriculum_id,program\n"
                              "C-9,Mathematics-grade-9\n",
                              "resource_id,subject\n"
                              "R-15,Mathematics\n");
    auto db = build_database(schema, tables);
    REQUIRE(db.sequences.size() == 1);
    const auto& ctx = db.sequences[0].context.assignments;
    CHECK(ctx.at("student.age") == ValueSet{"14-years"});
    CHECK(ctx.at("student.gender") == ValueSet{"Male"});
    CHECK(ctx.at("curriculum.program") == ValueSet{"Mathematics-grade-9"});
    // The foreign-key column itself is not a context attribute.
    CHECK_FALSE(ctx.count("student.curriculum_id"));
    CHECK(db.broken_link_warnings == 0);
}

TEST_CASE("all-unknown demographics give an empty context") {
    auto schema = star_schema();
    auto tables = star_tables(schema,
                              "student_id,resource_id,timestamp,action\n"
                              "s1,R-15,10,view\n",
                              "student_id,age,gender,curriculum_id\n"
                              "s1,unknown,,unknown\n",
                              "curriculum_id,program\nC-9,Maths\n",
                              "resource_id,subject\nR-15,Mathematics\n");
    auto db = build_database(schema, tables);
    CHECK(db.sequences[0].context.assignments.empty());
}

TEST_CASE("two enrollment links union their curriculum values") {
    auto schema = star_schema(
        {"student_id", "age", "gender", "curriculum_id", "curriculum_id_2"});
    schema.links.push_back(
        {"student", "curriculum", "curriculum_id_2", LinkKind::SourceToSource});
    auto tables = star_tables(schema,
                              "student_id,resource_id,timestamp,action\n"
                              "s1,R-15,10,view\n",
                              "student_id,age,gender,curriculum_id,curriculum_id_2\n"
                              "s1,14-years,Male,C-9,C-10\n",
                              "curriculum_id,program\n"
                              "C-9,Mathematics-grade-9\n"
                              "C-10,History-grade-9\n",
                              "resource_id,subject\nR-15,Mathematics\n");
    auto db = build_database(schema, tables);
    CHECK(db.sequences[0].context.assignments.at("curriculum.program") ==
          ValueSet{"Mathematics-grade-9", "History-grade-9"});
}

TEST_CASE("missing students and broken curriculum keys degrade to warnings") {
    auto schema = star_schema();
    auto tables = star_tables(schema,
                              "student_id,resource_id,timestamp,action\n"
                              "s1,R-15,10,view\n"
                              "s2,R-15,10,view\n",
                              "student_id,age,gender,curriculum_id\n"
                              "s1,14-years,Male,C-404\n",
                              "curriculum_id,program\nC-9,Maths\n",
                              "resource_id,subject\nR-15,Mathematics\n");
    auto db = build_database(schema, tables);
    REQUIRE(db.sequences.size() == 2);
    // s1 keeps its student-level context despite the dead curriculum key.
    CHECK(db.sequences[0].context.assignments.count("student.age") == 1);
    CHECK_FALSE(db.sequences[0].context.assignments.count("curriculum.program"));
    // s2 is absent from the students table: empty context, still present.
    CHECK(db.sequences[1].context.assignments.empty());
    CHECK(db.broken_link_warnings == 2);
}

TEST_CASE("resource attributes resolve; undescribed resources go all-Unknown") {
    auto schema = star_schema();
    auto tables = star_tables(schema,
                              "student_id,resource_id,timestamp,action\n"
                              "s1,R-7,10,view\n"
                              "s1,R-999,20,view\n"
                              "s1,R-8,30,view\n"
                              "s1,R-9,40,view\n",
                              "student_id,age,gender,curriculum_id\n"
                              "s1,14-years,Male,C-9\n",
                              "curriculum_id,program\nC-9,Maths\n",
                              "resource_id,subject\n"
                              "R-7,Mathematics\n"
                              "R-8,Mathematics\n"
                              "R-9,History\n");
    auto db = build_database(schema, tables);
    CHECK(db.attributes_of("R-7").attrs.at("resource.subject") == "Mathematics");
    CHECK_FALSE(db.attributes_of("R-999").attrs.at("resource.subject").has_value());
    // Exactly one all-Unknown entry among the referenced resources.
    std::size_t unknown_count = 0;
    for (const char* r : {"R-7", "R-8", "R-9", "R-999"}) {
        const auto& attrs = db.attributes_of(r).attrs;
        bool all_unknown = true;
        for (const auto& [k, v] : attrs) all_unknown &= !v.has_value();
        if (all_unknown) ++unknown_count;
    }
    CHECK(unknown_count == 1);
    // Domains carry only observed, non-Unknown values.
    CHECK(db.resource_domains.at("resource.subject") ==
          ValueSet{"Mathematics", "History"});
}

TEST_CASE("join is deterministic") {
    auto schema = star_schema();
    auto make = [&] {
        auto tables = star_tables(schema,
                                  "student_id,resource_id,timestamp,action\n"
                                  "s2,R-7,10,view\n"
                                  "s1,R-7,10,view\n",
                                  "student_id,age,gender,curriculum_id\n"
                                  "s1,14-years,Male,C-9\n"
                                  "s2,15-years,Female,C-9\n",
                                  "curriculum_id,program\nC-9,Maths\n",
                                  "resource_id,subject\nR-7,Mathematics\n");
        return build_database(schema, tables);
    };
    auto a = make();
    auto b = make();
    REQUIRE(a.sequences.size() == b.sequences.size());
    for (std::size_t i = 0; i < a.sequences.size(); ++i) {
        CHECK(a.sequences[i].student == b.sequences[i].student);
        CHECK(a.sequences[i].context.assignments ==
              b.sequences[i].context.assignments);
    }
}
