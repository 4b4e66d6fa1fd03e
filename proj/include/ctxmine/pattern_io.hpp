#ifndef CTXMINE_PATTERN_IO_HPP
#define CTXMINE_PATTERN_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "ctxmine/pattern.hpp"

namespace ctxmine {

struct StudentProfile {
    std::map<std::string, ValueSet> assignments;
};

struct PatternDocument {
    MiningParams params;
    std::vector<Pattern> patterns;
};

class PatternIoError : public std::runtime_error {
public:
    explicit PatternIoError(const std::string& what) : std::runtime_error(what) {}
};

// Bit-exact pattern document: UTF-8 JSON, two-space indent, fixed key
// order, support with six fractional digits.
std::string serialize_patterns(const std::vector<Pattern>& patterns,
                               const MiningParams& params);

PatternDocument parse_patterns(const std::string& json_text);

// Patterns whose context the profile satisfies, in input order.
std::vector<Pattern> match_student(const StudentProfile& profile,
                                   const std::vector<Pattern>& patterns);

}  // namespace ctxmine

#endif
