#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace topogen {

using Word = std::vector<int>;

// Eventually periodic digit sequence u.w^inf, stored in canonical form:
// the preperiod never ends with the digit the period ends with (otherwise the
// boundary slides left), and the period is primitive (not a proper power).
// Two addresses denote the same infinite sequence iff their canonical forms
// are identical, so equality is structural.
class PreperiodicAddress {
  public:
    // Canonicalizes on construction. The period must be nonempty.
    PreperiodicAddress(Word preperiod, Word period);

    // Parses "011(10)" or, with multi-digit symbols, "0,11(10,3)". The
    // parenthesized part is the period and must be present and nonempty.
    static PreperiodicAddress parse(const std::string& text);

    const Word& preperiod() const { return pre_; }
    const Word& period() const { return per_; }

    int digit_at(std::size_t n) const;
    // Least digit bound consistent with the content (max digit + 1).
    int min_alphabet() const;

    PreperiodicAddress prepend(int digit) const;
    PreperiodicAddress shift() const;  // drops the first digit
    Word prefix(std::size_t n) const;

    // Inverse of parse; digits joined with commas iff any digit exceeds 9
    // (with a trailing comma when no separator would otherwise appear).
    std::string str() const;

    bool operator==(const PreperiodicAddress&) const = default;
    auto operator<=>(const PreperiodicAddress&) const = default;

  private:
    Word pre_, per_;
};

}  // namespace topogen
