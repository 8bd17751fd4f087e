#pragma once

// Acceptance-preserving compilers between automaton models.
//
// nqfa_to_gpfa: the surviving density matrix is carried in Hermitian-basis
// coordinates (n^2 reals) together with one accumulator for the accepted
// mass, so the resulting GPFA has n^2 + 1 states. qfc_to_gpfa carries one
// coordinate block per control state (|D| * n^2 states; acceptance is read
// off the final vector, no accumulator). End-markers are folded into the
// initial and final vectors, so the output is marker-free over Σ.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfa/linalg.hpp"
#include "qfa/models.hpp"

namespace qfa {

inline Nqfa kwqfa_to_nqfa(const Kwqfa& m) { return m.nqfa(); }

inline Gpfa pfa_to_gpfa(const Pfa& m) { return m.gpfa(); }

/// Real-linear one-step maps of an NQFA tape symbol in basis coordinates.
struct SuperoperatorBlock {
    RealMatrix survival; ///< column i = coordinates of T(E_i)
    RealVector accept;   ///< entry i = accepted mass produced from E_i
    /// Largest imaginary part dropped while taking coordinates; stays at
    /// rounding level because the maps preserve Hermiticity.
    double max_imaginary = 0.0;
};

/// Builds T_γ(ρ) = Π_non (Σ_j P_j U ρ U† P_j) Π_non and
/// a_γ(ρ) = trace(Π_acc (Σ_j P_j U ρ U† P_j) Π_acc) column by column.
inline SuperoperatorBlock nqfa_symbol_block(const Nqfa& m, std::size_t tape_index,
                                            const HermitianBasis& basis)
{
    const auto n = static_cast<Eigen::Index>(m.size());
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto& u = m.unitary(tape_index);
    const auto& family = m.measurement(tape_index);
    const auto& halting = m.halting();

    SuperoperatorBlock block{RealMatrix::Zero(dim, dim), RealVector::Zero(dim), 0.0};
    for (Eigen::Index i = 0; i < dim; ++i) {
        const ComplexMatrix evolved = u * basis[static_cast<std::size_t>(i)] * u.adjoint();
        ComplexMatrix measured = ComplexMatrix::Zero(n, n);
        for (const auto& p : family.projectors)
            measured.noalias() += p * evolved * p;

        complex accepted = 0.0;
        for (Eigen::Index q = 0; q < n; ++q) {
            if (halting[q] == Halting::accepting)
                accepted += measured(q, q);
            if (halting[q] != Halting::non_halting) {
                measured.row(q).setZero();
                measured.col(q).setZero();
            }
        }
        const ComplexVector coords = basis.coordinates(measured);
        block.survival.col(i) = coords.real();
        block.accept(i) = accepted.real();
        block.max_imaginary = std::max({block.max_imaginary, coords.imag().cwiseAbs().maxCoeff(),
                                        std::abs(accepted.imag())});
    }
    return block;
}

namespace detail {

/// Row-convention matrix acting on (r, acc): r' = T r, acc' = acc + a·r.
inline RealMatrix accumulator_matrix(const SuperoperatorBlock& b)
{
    const auto dim = b.survival.rows();
    RealMatrix a = RealMatrix::Zero(dim + 1, dim + 1);
    a.topLeftCorner(dim, dim) = b.survival.transpose();
    a.col(dim).head(dim) = b.accept;
    a(dim, dim) = 1.0;
    return a;
}

} // namespace detail

inline Gpfa nqfa_to_gpfa(const Nqfa& m)
{
    const auto basis = hermitian_basis(m.size());
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto& alphabet = m.alphabet();

    GpfaDescription d;
    d.alphabet = alphabet.symbols();
    for (std::size_t s = 0; s < alphabet.size(); ++s)
        d.transitions[alphabet.symbols()[s]] =
            detail::accumulator_matrix(nqfa_symbol_block(m, s, basis));

    RealVector start = RealVector::Zero(dim + 1);
    start.head(dim) = vectorize(basis_projector(m.initial(), m.size()), basis);
    const RealMatrix left = detail::accumulator_matrix(nqfa_symbol_block(m, alphabet.left(), basis));
    d.initial = (start.transpose() * left).transpose();

    RealVector read_accumulator = RealVector::Zero(dim + 1);
    read_accumulator(dim) = 1.0;
    const RealMatrix right = detail::accumulator_matrix(nqfa_symbol_block(m, alphabet.right(), basis));
    d.final = right * read_accumulator;
    return build_gpfa(d);
}

inline Gpfa kwqfa_to_gpfa(const Kwqfa& m) { return nqfa_to_gpfa(m.nqfa()); }

/// Outcome labels and control states used by kwqfa_to_qfc.
namespace kw_control {
inline constexpr const char* go = "g";
inline constexpr const char* accept = "a";
inline constexpr const char* reject = "r";
/// Only "g" seen so far.
inline constexpr const char* running = "running";
/// First non-"g" outcome was "a"; absorbing and accepting.
inline constexpr const char* accepted = "accepted";
/// First non-"g" outcome was "r"; absorbing dead state.
inline constexpr const char* rejected = "rejected";
} // namespace kw_control

/// QFC with the KWQFA's states and unitaries, observable = halting
/// measurement {g: non-halting, a: accepting, r: rejecting} and control
/// language g* a (a|r|g)*. After the first "a" every continuation is
/// accepted, so the sum over continuations equals the halting-accept mass.
inline Qfc kwqfa_to_qfc(const Kwqfa& m)
{
    namespace kc = kw_control;
    const auto& nq = m.nqfa();
    const auto kd = m.description();

    QfcDescription d;
    d.alphabet = kd.alphabet;
    d.states = kd.states;
    d.initial = kd.initial;
    d.unitaries = kd.unitaries;
    d.observable = {{kc::go, nq.halting_projector(Halting::non_halting)},
                    {kc::accept, nq.halting_projector(Halting::accepting)},
                    {kc::reject, nq.halting_projector(Halting::rejecting)}};

    auto& dfa = d.control;
    dfa.alphabet = {kc::go, kc::accept, kc::reject};
    dfa.states = {kc::running, kc::accepted, kc::rejected};
    dfa.start = kc::running;
    dfa.accepting = {kc::accepted};
    dfa.transitions[kc::running] = {{kc::go, kc::running}, {kc::accept, kc::accepted}, {kc::reject, kc::rejected}};
    for (const char* sink : {kc::accepted, kc::rejected})
        dfa.transitions[sink] = {{kc::go, sink}, {kc::accept, sink}, {kc::reject, sink}};
    return build_qfc(d);
}

/// Coordinates of ρ ↦ P_c U ρ U† P_c for every observable outcome c.
inline std::vector<SuperoperatorBlock> qfc_symbol_blocks(const Qfc& m, std::size_t tape_index,
                                                         const HermitianBasis& basis)
{
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto& u = m.unitary(tape_index);
    const auto& obs = m.observable();
    std::vector<SuperoperatorBlock> blocks(obs.size(),
                                           SuperoperatorBlock{RealMatrix::Zero(dim, dim), RealVector(), 0.0});
    for (Eigen::Index i = 0; i < dim; ++i) {
        const ComplexMatrix evolved = u * basis[static_cast<std::size_t>(i)] * u.adjoint();
        for (std::size_t c = 0; c < obs.size(); ++c) {
            const auto& p = obs.projectors[c];
            const ComplexVector coords = basis.coordinates(p * evolved * p);
            blocks[c].survival.col(i) = coords.real();
            blocks[c].max_imaginary =
                std::max(blocks[c].max_imaginary, coords.imag().cwiseAbs().maxCoeff());
        }
    }
    return blocks;
}

namespace detail {

/// Row-convention matrix on the |D| stacked coordinate blocks.
inline RealMatrix qfc_step_matrix(const Qfc& m, std::size_t tape_index, const HermitianBasis& basis)
{
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto& dfa = m.control();
    const auto d_count = static_cast<Eigen::Index>(dfa.states.size());
    const auto blocks = qfc_symbol_blocks(m, tape_index, basis);

    RealMatrix a = RealMatrix::Zero(d_count * dim, d_count * dim);
    for (Eigen::Index src = 0; src < d_count; ++src)
        for (std::size_t c = 0; c < blocks.size(); ++c) {
            const auto dst = static_cast<Eigen::Index>(dfa.delta[src][c]);
            a.block(src * dim, dst * dim, dim, dim) += blocks[c].survival.transpose();
        }
    return a;
}

} // namespace detail

inline Gpfa qfc_to_gpfa(const Qfc& m)
{
    const auto basis = hermitian_basis(m.size());
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto& alphabet = m.alphabet();
    const auto& dfa = m.control();
    const auto d_count = static_cast<Eigen::Index>(dfa.states.size());

    GpfaDescription d;
    d.alphabet = alphabet.symbols();
    for (std::size_t s = 0; s < alphabet.size(); ++s)
        d.transitions[alphabet.symbols()[s]] = detail::qfc_step_matrix(m, s, basis);

    RealVector start = RealVector::Zero(d_count * dim);
    start.segment(static_cast<Eigen::Index>(dfa.start) * dim, dim) =
        vectorize(basis_projector(m.initial(), m.size()), basis);
    d.initial = (start.transpose() * detail::qfc_step_matrix(m, alphabet.left(), basis)).transpose();

    RealVector accepted_trace = RealVector::Zero(d_count * dim);
    const RealVector trace = basis.trace_covector();
    for (Eigen::Index q = 0; q < d_count; ++q)
        if (dfa.accepting[static_cast<std::size_t>(q)])
            accepted_trace.segment(q * dim, dim) = trace;
    d.final = detail::qfc_step_matrix(m, alphabet.right(), basis) * accepted_trace;
    return build_gpfa(d);
}

/// Applies the unique converter from the model's kind to `target`
/// ("gpfa", "nqfa" or "qfc"). KWQFA to GPFA goes through the NQFA
/// embedding, the smaller of the two routes.
inline Model convert_to(const Model& m, std::string_view target)
{
    if (const auto* kw = std::get_if<Kwqfa>(&m)) {
        if (target == "nqfa")
            return kwqfa_to_nqfa(*kw);
        if (target == "qfc")
            return kwqfa_to_qfc(*kw);
        if (target == "gpfa")
            return kwqfa_to_gpfa(*kw);
    } else if (target == "gpfa") {
        if (const auto* nq = std::get_if<Nqfa>(&m))
            return nqfa_to_gpfa(*nq);
        if (const auto* q = std::get_if<Qfc>(&m))
            return qfc_to_gpfa(*q);
        if (const auto* p = std::get_if<Pfa>(&m))
            return pfa_to_gpfa(*p);
    }
    throw error("no conversion path from " + kind_name(m) + " to " + std::string(target));
}

} // namespace qfa
