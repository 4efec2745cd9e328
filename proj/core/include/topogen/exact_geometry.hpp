#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "topogen/automaton.hpp"

namespace topogen {

using Rational = boost::multiprecision::cpp_rational;

// Element x + y*sqrt(N)*i of the imaginary quadratic field Q(sqrt(-N)),
// N a positive square-free integer shared by all operands.
struct ExactComplex {
    Rational x, y;
    long field_n = 1;

    static ExactComplex zero(long n) { return {0, 0, n}; }
    static ExactComplex one(long n) { return {1, 0, n}; }

    ExactComplex operator+(const ExactComplex& o) const;
    ExactComplex operator-(const ExactComplex& o) const;
    ExactComplex operator*(const ExactComplex& o) const;
    ExactComplex conj() const { return {x, -y, field_n}; }
    ExactComplex inverse() const;  // throws DomainError on zero
    Rational norm_sq() const;      // x^2 + N y^2, multiplicative
    bool is_zero() const { return x == 0 && y == 0; }

    bool operator==(const ExactComplex& o) const;
    std::string str() const;
};

// z -> alpha * z + beta, or alpha * conj(z) + beta when conjugating.
struct Similitude {
    ExactComplex alpha, beta;
    bool conjugating = false;

    static Similitude identity(long field_n);
    ExactComplex apply(const ExactComplex& z) const;
    Similitude compose(const Similitude& inner) const;  // this after inner
    Similitude inverse() const;
    bool operator==(const Similitude& o) const;
    // Value tuple usable as an ordered map key.
    std::tuple<bool, Rational, Rational, Rational, Rational> key() const {
        return {conjugating, alpha.x, alpha.y, beta.x, beta.y};
    }
    std::string str() const;
};

struct IfsSystem {
    long field_n = 1;
    std::vector<Similitude> maps;  // all contracting with one common ratio
};

struct NeighborGraphResult {
    Automaton automaton;
    std::vector<Similitude> state_map;  // index-aligned with automaton states
    Rational prune_bound;               // rational upper bound used for (2R)^2
};

struct NeighborGraphOptions {
    std::size_t max_states = 10000;
    // Optional override for the squared pruning radius; must dominate (2R)^2.
    std::optional<Rational> prune_bound;
};

// Computes the neighbor automaton of the IFS: states are the isometries
// h = f_i^-1 .. f_j with X and hX intersecting, edges follow the recursion
// h' = f_i^-1 h f_j, the initial state is the identity. Throws DomainError
// ("not finite type within bound") when the guard trips.
NeighborGraphResult neighbor_graph(const IfsSystem& ifs, const NeighborGraphOptions& opt = {});

struct RepresentationCheck {
    bool ok = false;
    std::string witness;  // first failing edge or involution pair, if any
};

// Verifies state_map(root) = id, the edge recursion
// state_map(c) = f_i^-1 state_map(b) f_j for every edge, and
// state_map(b~) = state_map(b)^-1, all exactly.
RepresentationCheck verify_representation(const Automaton& a, const IfsSystem& ifs,
                                          const std::vector<Similitude>& state_map);

struct RelationResult {
    std::string name;
    bool holds = false;
};

// Checks the defining relations of the reflection-group presentation used by
// the right-triangle system: a^2 = b^2 = c^2 = id, ab = ba, (ac)^3 = id,
// (cb)^6 = id, and the conjugation relations moving the generators through g.
std::vector<RelationResult> coxeter_relation_check(const Similitude& a, const Similitude& b,
                                                   const Similitude& c, const Similitude& g);

}  // namespace topogen
