#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gp/correlations.hpp"
#include "gp/kernel.hpp"

namespace gp {

struct IdentityReport {
    std::string identity;
    std::string parameters;
    cplx lhs;
    cplx rhs;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// coef * K_{sigma,tau}(d), with K evaluated through KernelContext::eval.
struct KernelTerm {
    cplx coef;
    int sigma;
    int tau;
    long d;
};

// sum of terms + constant = 0.
struct LinearRelation {
    std::vector<KernelTerm> terms;
    cplx constant{0.0, 0.0};

    cplx evaluate(const KernelContext& ctx) const;
    // Divides everything by the coefficient of the first term.
    LinearRelation normalized() const;
    std::string to_string() const;
};

enum class RelationSide { Row, Column };

// Relations for a single plus factor (AlphaPlus or BetaPlus) with parameter p
// at column k. Row relations link K_{k-1,tau} and K_{k,tau} for fixed tau;
// column relations link K_{sigma,k-1} and K_{sigma,k} for fixed sigma.
LinearRelation plus_relation(FactorKind kind, double p, int k, RelationSide side, int free_index,
                             long d);

// The corresponding relation for AlphaMinus or BetaMinus, obtained by writing
// the factor as c * u^n times a plus factor with parameter 1/p and pulling the
// plus relation back through the row shift and conjugation.
LinearRelation minus_relation(FactorKind kind, double p, int k, RelationSide side, int free_index,
                              long d);

IdentityReport check_linear_relation_alpha(const KernelContext& ctx, int k, int tau, long d);
IdentityReport check_linear_relation_beta(const KernelContext& ctx, int k, int tau, long d);
IdentityReport check_linear_relation_minus(const KernelContext& ctx, int k, int tau, long d);

enum class VanishingCase { AlphaTop, AlphaBottom, BetaTop, BetaBottom };
const char* vanishing_case_name(VanishingCase c);

// Three-site pattern on columns k-1, k that has probability zero when column k
// carries the matching single factor (row-mirrored for minus kinds).
EventSpec vanishing_pattern(VanishingCase c, FactorKind kind, int k, long x);
IdentityReport check_interlacing_vanishing(const KernelContext& ctx, VanishingCase c, int k,
                                           long x = 0);

// Source column k-1 carries a string of m-1 holes (alpha) or particles (beta)
// between two particles (holes) at rows x and x+m. The target column k then
// has exactly one particle (hole) in the m rows allowed by the factor kind.
// Checks that the sum over the m admissible target patterns equals the source
// event probability, and that every other target pattern has probability
// at most 1e-9.
IdentityReport check_general_interlacing(const KernelContext& ctx, int k, int m, long x = 0);

enum class MovePair { BetaBeta, AlphaAlpha, BetaAlpha, AlphaBeta };
const char* move_pair_name(MovePair p);

struct MoveEvents {
    EventSpec a, b;
    // weight_a * P(a) = weight_b * P(b)
    double weight_a, weight_b;
};

// Events for the elementary move across columns k-1, k, k+1 where psi_k and
// psi_{k+1} carry the kinds named by pair.
MoveEvents move_events(const KernelContext& ctx, MovePair pair, int k, long x = 0);
IdentityReport check_move_identity(const KernelContext& ctx, MovePair pair, int k, long x = 0);
IdentityReport check_move_in_environment(const KernelContext& ctx, MovePair pair, int k,
                                         const std::vector<Site>& environment, long x = 0);

enum class IdentitySuite { All, Linear, Interlacing, Moves, Environment };
IdentitySuite parse_identity_suite(const std::string& name);

// Runs every check applicable to the model's columns, with sweeps random
// draws of the free indices per check.
std::vector<IdentityReport> run_identity_suite(const KernelContext& ctx, IdentitySuite suite,
                                               int sweeps, std::uint64_t seed);

}  // namespace gp
