#ifndef CTXMINE_ORACLE_HPP
#define CTXMINE_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "ctxmine/pattern.hpp"

namespace ctxmine {
namespace oracle {

class InstanceTooLarge : public std::runtime_error {
public:
    explicit InstanceTooLarge(std::size_t students, std::size_t limit)
        : std::runtime_error("oracle refuses " + std::to_string(students) +
                             " students (limit " + std::to_string(limit) + ")") {}
};

// Backtracking subsequence / substring matcher, written independently of
// the miner's greedy projection path.
bool supports(const ContextualizedSequence& seq, const std::vector<Item>& items,
              const SequenceDatabase& db, const MiningParams& params);

// Exhaustive reference miner: enumerates every candidate context and item
// sequence and counts support by full scan. Ground truth for equivalence
// tests; exact same emission rules as the real miner.
std::vector<Pattern> brute_force_mine(const SequenceDatabase& db,
                                      const MiningParams& params,
                                      std::size_t max_students = 16);

}  // namespace oracle
}  // namespace ctxmine

#endif
