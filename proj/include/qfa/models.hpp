#pragma once

// Automaton models: NQFA, KWQFA, QFC (quantum) and GPFA, PFA (classical).
//
// Every model is built from a name-based description by a validating
// constructor that reports all violated invariants at once. Built models are
// immutable and index symbols and states by position.
//
// Tape convention for the quantum models: a word w is processed as
// "¢ w $". Tape indices 0..|Σ|-1 are the input symbols, |Σ| is the left
// marker, |Σ|+1 the right marker.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

using Word = std::vector<std::string>;

inline constexpr std::string_view left_marker = "\xC2\xA2"; // ¢
inline constexpr std::string_view right_marker = "$";

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {}

    const std::vector<std::string>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    std::size_t tape_size() const noexcept { return symbols_.size() + 2; }
    std::size_t left() const noexcept { return symbols_.size(); }
    std::size_t right() const noexcept { return symbols_.size() + 1; }

    std::string tape_name(std::size_t tape_index) const
    {
        if (tape_index == left())
            return std::string(left_marker);
        if (tape_index == right())
            return std::string(right_marker);
        return symbols_.at(tape_index);
    }

    /// Tape index of a symbol name, markers included.
    std::optional<std::size_t> find_tape(std::string_view name) const
    {
        if (name == left_marker)
            return left();
        if (name == right_marker)
            return right();
        return find(name);
    }

    /// Index into Σ; markers are not input symbols.
    std::optional<std::size_t> find(std::string_view name) const
    {
        auto it = std::find(symbols_.begin(), symbols_.end(), name);
        if (it == symbols_.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - symbols_.begin());
    }

    std::vector<std::size_t> encode(const Word& w) const
    {
        std::vector<std::size_t> out;
        out.reserve(w.size());
        for (const auto& s : w) {
            auto idx = find(s);
            if (!idx)
                throw input_error("symbol '" + s + "' is not in the input alphabet");
            out.push_back(*idx);
        }
        return out;
    }

    /// Tape order used for serialization: ¢, Σ..., $.
    std::vector<std::size_t> tape_order() const
    {
        std::vector<std::size_t> order{left()};
        for (std::size_t i = 0; i < size(); ++i)
            order.push_back(i);
        order.push_back(right());
        return order;
    }

    std::vector<Violation> problems(const std::string& path = "alphabet") const
    {
        std::vector<Violation> out;
        if (symbols_.empty())
            out.push_back({path, "input alphabet is empty"});
        std::set<std::string> seen;
        for (const auto& s : symbols_) {
            if (s.empty())
                out.push_back({path, "empty symbol name"});
            else if (s == left_marker || s == right_marker)
                out.push_back({path, "symbol '" + s + "' is a reserved end-marker"});
            else if (s.find(',') != std::string::npos)
                out.push_back({path, "symbol '" + s + "' contains a comma"});
            if (!seen.insert(s).second)
                out.push_back({path, "duplicate symbol '" + s + "'"});
        }
        return out;
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<std::string> symbols_;
};

enum class Halting { non_halting, accepting, rejecting };

struct Partition {
    std::vector<std::string> non_halting;
    std::vector<std::string> accepting;
    std::vector<std::string> rejecting;
};

struct KwqfaDescription {
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    std::string initial;
    Partition partition;
    std::map<std::string, ComplexMatrix> unitaries; ///< keyed by tape symbol
};

struct NqfaDescription {
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    std::string initial;
    Partition partition;
    std::map<std::string, ComplexMatrix> unitaries;
    std::map<std::string, std::vector<ComplexMatrix>> measurements;
};

struct ObservableOutcome {
    std::string label;
    ComplexMatrix projector;
};

struct ControlDfaDescription {
    std::vector<std::string> alphabet; ///< outcome labels C
    std::vector<std::string> states;
    std::string start;
    std::vector<std::string> accepting;
    std::map<std::string, std::map<std::string, std::string>> transitions; ///< d -> c -> d'
};

struct QfcDescription {
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    std::string initial;
    std::map<std::string, ComplexMatrix> unitaries;
    std::vector<ObservableOutcome> observable;
    ControlDfaDescription control;
};

struct GpfaDescription {
    std::vector<std::string> alphabet;
    RealVector initial;
    std::map<std::string, RealMatrix> transitions;
    RealVector final;
};

using PfaDescription = GpfaDescription;

namespace detail {

inline std::optional<std::size_t> index_of(const std::vector<std::string>& names,
                                           std::string_view name)
{
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

inline void append(std::vector<Violation>& out, std::vector<Violation> more)
{
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

inline std::vector<Violation> check_names(const std::vector<std::string>& names,
                                          const std::string& path, const std::string& what)
{
    std::vector<Violation> out;
    if (names.empty())
        out.push_back({path, "no " + what + "s"});
    std::set<std::string> seen;
    for (const auto& s : names) {
        if (s.empty())
            out.push_back({path, "empty " + what + " name"});
        if (!seen.insert(s).second)
            out.push_back({path, "duplicate " + what + " '" + s + "'"});
    }
    return out;
}

/// Checks that `m` has an entry for exactly the tape symbols of `alphabet`.
template <typename Map>
std::vector<Violation> check_tape_keys(const Map& m, const Alphabet& alphabet,
                                       const std::string& path)
{
    std::vector<Violation> out;
    for (std::size_t t : alphabet.tape_order())
        if (!m.count(alphabet.tape_name(t)))
            out.push_back({path + "." + alphabet.tape_name(t),
                           "missing entry for symbol '" + alphabet.tape_name(t) + "'"});
    for (const auto& [key, value] : m)
        if (!alphabet.find_tape(key))
            out.push_back({path + "." + key, "unknown symbol '" + key + "'"});
    return out;
}

inline std::vector<Violation> check_unitaries(const std::map<std::string, ComplexMatrix>& unitaries,
                                              const Alphabet& alphabet, std::size_t n)
{
    auto out = check_tape_keys(unitaries, alphabet, "unitaries");
    for (const auto& [key, u] : unitaries) {
        if (!alphabet.find_tape(key))
            continue;
        const std::string path = "unitaries." + key;
        if (u.rows() != static_cast<Eigen::Index>(n) || u.cols() != static_cast<Eigen::Index>(n))
            out.push_back({path, "U_" + key + " must be " + std::to_string(n) + "x" +
                                     std::to_string(n)});
        else if (!validate_unitary(u))
            out.push_back({path, "U_" + key + " not unitary"});
    }
    return out;
}

inline std::vector<Violation> check_family(const ProjectorFamily& f, std::size_t n,
                                           const std::string& path, const std::string& name)
{
    std::vector<Violation> out;
    for (std::size_t i = 0; i < f.projectors.size(); ++i) {
        const auto& p = f.projectors[i];
        if (p.rows() != static_cast<Eigen::Index>(n) || p.cols() != static_cast<Eigen::Index>(n)) {
            out.push_back({path + "[" + std::to_string(i) + "]",
                           name + " projector " + std::to_string(i) + " must be " +
                               std::to_string(n) + "x" + std::to_string(n)});
            return out;
        }
    }
    for (const auto& problem : projector_family_problems(f))
        out.push_back({path, name + " " + problem});
    return out;
}

inline std::vector<std::size_t> indices_of(const std::vector<std::string>& names,
                                           const std::vector<std::string>& universe)
{
    std::vector<std::size_t> out;
    for (const auto& s : names)
        out.push_back(*index_of(universe, s));
    return out;
}

} // namespace detail

/// Nayak QFA. Each tape symbol applies its unitary, then its intermediate
/// projective measurement, then the accept/reject/continue measurement given
/// by the halting partition.
class Nqfa {
public:
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<std::string>& states() const noexcept { return states_; }
    std::size_t initial() const noexcept { return initial_; }
    const std::vector<Halting>& halting() const noexcept { return halting_; }
    const ComplexMatrix& unitary(std::size_t tape_index) const { return unitaries_.at(tape_index); }
    const ProjectorFamily& measurement(std::size_t tape_index) const
    {
        return measurements_.at(tape_index);
    }

    /// Diagonal projector onto the span of the states with the given role.
    ComplexMatrix halting_projector(Halting h) const
    {
        const auto n = static_cast<Eigen::Index>(size());
        ComplexMatrix p = ComplexMatrix::Zero(n, n);
        for (std::size_t i = 0; i < size(); ++i)
            if (halting_[i] == h)
                p(i, i) = 1.0;
        return p;
    }

    NqfaDescription description() const
    {
        NqfaDescription d;
        d.alphabet = alphabet_.symbols();
        d.states = states_;
        d.initial = states_[initial_];
        for (std::size_t i = 0; i < size(); ++i) {
            auto& bucket = halting_[i] == Halting::accepting   ? d.partition.accepting
                           : halting_[i] == Halting::rejecting ? d.partition.rejecting
                                                               : d.partition.non_halting;
            bucket.push_back(states_[i]);
        }
        for (std::size_t t = 0; t < alphabet_.tape_size(); ++t) {
            d.unitaries[alphabet_.tape_name(t)] = unitaries_[t];
            d.measurements[alphabet_.tape_name(t)] = measurements_[t].projectors;
        }
        return d;
    }

    friend bool operator==(const Nqfa& a, const Nqfa& b)
    {
        if (!(a.alphabet_ == b.alphabet_ && a.states_ == b.states_ && a.initial_ == b.initial_ &&
              a.halting_ == b.halting_ && a.measurements_ == b.measurements_))
            return false;
        for (std::size_t t = 0; t < a.unitaries_.size(); ++t)
            if (a.unitaries_[t] != b.unitaries_[t])
                return false;
        return true;
    }

private:
    friend Nqfa build_nqfa(const NqfaDescription&);

    Alphabet alphabet_;
    std::vector<std::string> states_;
    std::size_t initial_ = 0;
    std::vector<Halting> halting_;
    std::vector<ComplexMatrix> unitaries_;
    std::vector<ProjectorFamily> measurements_;
};

namespace detail {

inline std::vector<Violation> check_quantum_core(const std::vector<std::string>& alphabet,
                                                 const std::vector<std::string>& states,
                                                 const std::string& initial,
                                                 const std::map<std::string, ComplexMatrix>& unitaries)
{
    std::vector<Violation> out;
    const Alphabet a(alphabet);
    append(out, a.problems());
    append(out, check_names(states, "states", "state"));
    if (!states.empty() && !index_of(states, initial))
        out.push_back({"initial", "initial state '" + initial + "' is not a state"});
    if (a.problems().empty() && !states.empty())
        append(out, check_unitaries(unitaries, a, states.size()));
    return out;
}

inline std::vector<Violation> check_partition(const Partition& p,
                                              const std::vector<std::string>& states,
                                              const std::string& initial)
{
    std::vector<Violation> out;
    std::map<std::string, int> count;
    auto scan = [&](const std::vector<std::string>& part, const char* name) {
        for (const auto& s : part) {
            if (!index_of(states, s))
                out.push_back({std::string("partition.") + name, "unknown state '" + s + "'"});
            ++count[s];
        }
    };
    scan(p.non_halting, "non_halting");
    scan(p.accepting, "accepting");
    scan(p.rejecting, "rejecting");
    for (const auto& s : states) {
        if (count[s] == 0)
            out.push_back({"partition", "state '" + s + "' is in no partition block"});
        else if (count[s] > 1)
            out.push_back({"partition", "state '" + s + "' is in more than one partition block"});
    }
    if (index_of(states, initial) &&
        std::find(p.non_halting.begin(), p.non_halting.end(), initial) == p.non_halting.end())
        out.push_back({"initial", "initial state must be non-halting"});
    return out;
}

} // namespace detail

/// Every violated NQFA invariant; empty iff build_nqfa succeeds.
inline std::vector<Violation> check(const NqfaDescription& d)
{
    auto out = detail::check_quantum_core(d.alphabet, d.states, d.initial, d.unitaries);
    detail::append(out, detail::check_partition(d.partition, d.states, d.initial));
    const Alphabet a(d.alphabet);
    if (a.problems().empty() && !d.states.empty()) {
        detail::append(out, detail::check_tape_keys(d.measurements, a, "measurements"));
        for (const auto& [key, projectors] : d.measurements) {
            if (!a.find_tape(key))
                continue;
            detail::append(out, detail::check_family(ProjectorFamily{projectors, {}}, d.states.size(),
                                                     "measurements." + key, "M_" + key));
        }
    }
    return out;
}

inline Nqfa build_nqfa(const NqfaDescription& d)
{
    if (auto problems = check(d); !problems.empty())
        throw validation_error(std::move(problems));
    Nqfa m;
    m.alphabet_ = Alphabet(d.alphabet);
    m.states_ = d.states;
    m.initial_ = *detail::index_of(d.states, d.initial);
    m.halting_.assign(d.states.size(), Halting::non_halting);
    for (auto i : detail::indices_of(d.partition.accepting, d.states))
        m.halting_[i] = Halting::accepting;
    for (auto i : detail::indices_of(d.partition.rejecting, d.states))
        m.halting_[i] = Halting::rejecting;
    for (std::size_t t = 0; t < m.alphabet_.tape_size(); ++t) {
        const auto name = m.alphabet_.tape_name(t);
        m.unitaries_.push_back(d.unitaries.at(name));
        m.measurements_.push_back(ProjectorFamily{d.measurements.at(name), {}});
    }
    return m;
}

/// NQFA description of a KWQFA: every intermediate measurement is {I}.
inline NqfaDescription with_identity_measurements(const KwqfaDescription& d)
{
    NqfaDescription out{d.alphabet, d.states, d.initial, d.partition, d.unitaries, {}};
    const std::size_t n = d.states.size();
    const Alphabet a(d.alphabet);
    for (std::size_t t = 0; t < a.tape_size(); ++t)
        out.measurements[a.tape_name(t)] = {ComplexMatrix::Identity(n, n)};
    return out;
}

/// Kondacs-Watrous QFA: an NQFA whose intermediate measurements are all {I}.
class Kwqfa {
public:
    const Nqfa& nqfa() const noexcept { return nqfa_; }
    const Alphabet& alphabet() const noexcept { return nqfa_.alphabet(); }
    std::size_t size() const noexcept { return nqfa_.size(); }

    KwqfaDescription description() const
    {
        auto d = nqfa_.description();
        return {d.alphabet, d.states, d.initial, d.partition, d.unitaries};
    }

    friend bool operator==(const Kwqfa&, const Kwqfa&) = default;

private:
    friend Kwqfa build_kwqfa(const KwqfaDescription&);
    explicit Kwqfa(Nqfa m) : nqfa_(std::move(m)) {}

    Nqfa nqfa_;
};

inline std::vector<Violation> check(const KwqfaDescription& d)
{
    auto out = detail::check_quantum_core(d.alphabet, d.states, d.initial, d.unitaries);
    detail::append(out, detail::check_partition(d.partition, d.states, d.initial));
    return out;
}

inline Kwqfa build_kwqfa(const KwqfaDescription& d)
{
    if (auto problems = check(d); !problems.empty())
        throw validation_error(std::move(problems));
    return Kwqfa(build_nqfa(with_identity_measurements(d)));
}

/// Control automaton over the observable's outcome labels; outcome indices
/// follow the observable's order.
struct ControlDfa {
    std::vector<std::string> states;
    std::size_t start = 0;
    std::vector<std::vector<std::size_t>> delta; ///< delta[d][outcome]
    std::vector<bool> accepting;

    friend bool operator==(const ControlDfa&, const ControlDfa&) = default;
};

/// Quantum finite automaton with control language: after each unitary the
/// labelled observable is measured; the input is accepted when the word of
/// outcomes is accepted by the control DFA.
class Qfc {
public:
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<std::string>& states() const noexcept { return states_; }
    std::size_t initial() const noexcept { return initial_; }
    const ComplexMatrix& unitary(std::size_t tape_index) const { return unitaries_.at(tape_index); }
    const ProjectorFamily& observable() const noexcept { return observable_; }
    const ControlDfa& control() const noexcept { return control_; }

    QfcDescription description() const
    {
        QfcDescription d;
        d.alphabet = alphabet_.symbols();
        d.states = states_;
        d.initial = states_[initial_];
        for (std::size_t t = 0; t < alphabet_.tape_size(); ++t)
            d.unitaries[alphabet_.tape_name(t)] = unitaries_[t];
        for (std::size_t c = 0; c < observable_.size(); ++c)
            d.observable.push_back({observable_.labels[c], observable_.projectors[c]});
        d.control.alphabet = observable_.labels;
        d.control.states = control_.states;
        d.control.start = control_.states[control_.start];
        for (std::size_t q = 0; q < control_.states.size(); ++q) {
            if (control_.accepting[q])
                d.control.accepting.push_back(control_.states[q]);
            for (std::size_t c = 0; c < observable_.size(); ++c)
                d.control.transitions[control_.states[q]][observable_.labels[c]] =
                    control_.states[control_.delta[q][c]];
        }
        return d;
    }

    friend bool operator==(const Qfc& a, const Qfc& b)
    {
        if (!(a.alphabet_ == b.alphabet_ && a.states_ == b.states_ && a.initial_ == b.initial_ &&
              a.observable_ == b.observable_ && a.control_ == b.control_))
            return false;
        for (std::size_t t = 0; t < a.unitaries_.size(); ++t)
            if (a.unitaries_[t] != b.unitaries_[t])
                return false;
        return true;
    }

private:
    friend Qfc build_qfc(const QfcDescription&);

    Alphabet alphabet_;
    std::vector<std::string> states_;
    std::size_t initial_ = 0;
    std::vector<ComplexMatrix> unitaries_;
    ProjectorFamily observable_;
    ControlDfa control_;
};

inline std::vector<Violation> check(const QfcDescription& d)
{
    auto out = detail::check_quantum_core(d.alphabet, d.states, d.initial, d.unitaries);

    ProjectorFamily obs;
    for (const auto& o : d.observable) {
        obs.projectors.push_back(o.projector);
        obs.labels.push_back(o.label);
    }
    detail::append(out, detail::check_names(obs.labels, "observable", "outcome label"));
    if (!d.states.empty())
        detail::append(out, detail::check_family(obs, d.states.size(), "observable", "observable"));

    const auto& dfa = d.control;
    detail::append(out, detail::check_names(dfa.states, "control.states", "control state"));
    if (std::set<std::string>(dfa.alphabet.begin(), dfa.alphabet.end()) !=
            std::set<std::string>(obs.labels.begin(), obs.labels.end()) ||
        dfa.alphabet.size() != obs.labels.size())
        out.push_back({"control.alphabet", "control alphabet does not match the observable labels"});
    if (!dfa.states.empty() && !detail::index_of(dfa.states, dfa.start))
        out.push_back({"control.start", "start state '" + dfa.start + "' is not a control state"});
    for (const auto& s : dfa.accepting)
        if (!detail::index_of(dfa.states, s))
            out.push_back({"control.accepting", "unknown control state '" + s + "'"});
    for (const auto& q : dfa.states) {
        auto row = dfa.transitions.find(q);
        for (const auto& c : dfa.alphabet) {
            const std::string path = "control.transitions." + q + "." + c;
            if (row == dfa.transitions.end() || !row->second.count(c)) {
                out.push_back({path, "missing transition for (" + q + ", " + c + ")"});
                continue;
            }
            if (!detail::index_of(dfa.states, row->second.at(c)))
                out.push_back({path, "target '" + row->second.at(c) + "' is not a control state"});
        }
    }
    for (const auto& [q, row] : dfa.transitions) {
        if (!detail::index_of(dfa.states, q)) {
            out.push_back({"control.transitions." + q, "unknown control state '" + q + "'"});
            continue;
        }
        for (const auto& [c, target] : row)
            if (!detail::index_of(dfa.alphabet, c))
                out.push_back({"control.transitions." + q + "." + c, "unknown outcome label '" + c + "'"});
    }
    return out;
}

inline Qfc build_qfc(const QfcDescription& d)
{
    if (auto problems = check(d); !problems.empty())
        throw validation_error(std::move(problems));
    Qfc m;
    m.alphabet_ = Alphabet(d.alphabet);
    m.states_ = d.states;
    m.initial_ = *detail::index_of(d.states, d.initial);
    for (std::size_t t = 0; t < m.alphabet_.tape_size(); ++t)
        m.unitaries_.push_back(d.unitaries.at(m.alphabet_.tape_name(t)));
    for (const auto& o : d.observable) {
        m.observable_.projectors.push_back(o.projector);
        m.observable_.labels.push_back(o.label);
    }
    auto& dfa = m.control_;
    dfa.states = d.control.states;
    dfa.start = *detail::index_of(dfa.states, d.control.start);
    dfa.accepting.assign(dfa.states.size(), false);
    for (auto i : detail::indices_of(d.control.accepting, dfa.states))
        dfa.accepting[i] = true;
    for (const auto& q : dfa.states) {
        std::vector<std::size_t> row;
        for (const auto& c : m.observable_.labels)
            row.push_back(*detail::index_of(dfa.states, d.control.transitions.at(q).at(c)));
        dfa.delta.push_back(std::move(row));
    }
    return m;
}

/// Generalized (Turakainen) automaton: value(w) = initial · A_{w_1} ··· A_{w_m} · final.
class Gpfa {
public:
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(initial_.size()); }
    const RealVector& initial() const noexcept { return initial_; }
    const RealVector& final() const noexcept { return final_; }
    const RealMatrix& transition(std::size_t symbol) const { return transitions_.at(symbol); }

    GpfaDescription description() const
    {
        GpfaDescription d{alphabet_.symbols(), initial_, {}, final_};
        for (std::size_t s = 0; s < alphabet_.size(); ++s)
            d.transitions[alphabet_.symbols()[s]] = transitions_[s];
        return d;
    }

    friend bool operator==(const Gpfa& a, const Gpfa& b)
    {
        if (!(a.alphabet_ == b.alphabet_) || a.size() != b.size() || a.initial_ != b.initial_ ||
            a.final_ != b.final_)
            return false;
        for (std::size_t s = 0; s < a.transitions_.size(); ++s)
            if (a.transitions_[s] != b.transitions_[s])
                return false;
        return true;
    }

private:
    friend Gpfa build_gpfa(const GpfaDescription&);

    Alphabet alphabet_;
    RealVector initial_;
    std::vector<RealMatrix> transitions_;
    RealVector final_;
};

inline std::vector<Violation> check(const GpfaDescription& d)
{
    std::vector<Violation> out;
    const Alphabet a(d.alphabet);
    detail::append(out, a.problems());
    const auto s = d.initial.size();
    if (s == 0)
        out.push_back({"initial", "GPFA needs at least one state"});
    if (!d.initial.allFinite())
        out.push_back({"initial", "non-finite entry"});
    if (d.final.size() != s)
        out.push_back({"final", "length " + std::to_string(d.final.size()) + " differs from state count " +
                                    std::to_string(s)});
    else if (!d.final.allFinite())
        out.push_back({"final", "non-finite entry"});
    for (const auto& sym : d.alphabet)
        if (!d.transitions.count(sym))
            out.push_back({"transitions." + sym, "missing matrix for symbol '" + sym + "'"});
    for (const auto& [sym, m] : d.transitions) {
        const std::string path = "transitions." + sym;
        if (!a.find(sym))
            out.push_back({path, "unknown symbol '" + sym + "'"});
        else if (m.rows() != s || m.cols() != s)
            out.push_back({path, "matrix must be " + std::to_string(s) + "x" + std::to_string(s)});
        else if (!m.allFinite())
            out.push_back({path, "non-finite entry"});
    }
    return out;
}

inline Gpfa build_gpfa(const GpfaDescription& d)
{
    if (auto problems = check(d); !problems.empty())
        throw validation_error(std::move(problems));
    Gpfa g;
    g.alphabet_ = Alphabet(d.alphabet);
    g.initial_ = d.initial;
    g.final_ = d.final;
    for (const auto& sym : d.alphabet)
        g.transitions_.push_back(d.transitions.at(sym));
    return g;
}

/// Stochastic special case of a GPFA: distribution in, row-stochastic
/// matrices, 0/1 final indicator.
class Pfa {
public:
    const Gpfa& gpfa() const noexcept { return gpfa_; }
    const Alphabet& alphabet() const noexcept { return gpfa_.alphabet(); }
    std::size_t size() const noexcept { return gpfa_.size(); }
    PfaDescription description() const { return gpfa_.description(); }

    friend bool operator==(const Pfa&, const Pfa&) = default;

private:
    friend Pfa build_pfa(const PfaDescription&);
    explicit Pfa(Gpfa g) : gpfa_(std::move(g)) {}

    Gpfa gpfa_;
};

inline std::vector<Violation> check_pfa(const PfaDescription& d)
{
    auto out = check(d);
    if (!out.empty())
        return out;
    if ((d.initial.array() < 0.0).any() || std::abs(d.initial.sum() - 1.0) > tol_valid)
        out.push_back({"initial", "initial vector is not a probability distribution"});
    for (const auto& [sym, m] : d.transitions)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const std::string path = "transitions." + sym + "[" + std::to_string(r) + "]";
            if ((m.row(r).array() < 0.0).any())
                out.push_back({path, "row " + std::to_string(r) + " of A_" + sym + " has a negative entry"});
            if (std::abs(m.row(r).sum() - 1.0) > tol_valid)
                out.push_back({path, "row " + std::to_string(r) + " of A_" + sym + " sums to " +
                                         std::to_string(m.row(r).sum()) + ", not 1"});
        }
    for (Eigen::Index i = 0; i < d.final.size(); ++i)
        if (d.final(i) != 0.0 && d.final(i) != 1.0)
            out.push_back({"final", "final vector must be a 0/1 indicator"});
    return out;
}

inline Pfa build_pfa(const PfaDescription& d)
{
    if (auto problems = check_pfa(d); !problems.empty())
        throw validation_error(std::move(problems));
    return Pfa(build_gpfa(d));
}

/// Membership threshold for unbounded-error recognition; comparison is strict.
class Cutpoint {
public:
    explicit Cutpoint(double lambda) : lambda_(lambda)
    {
        if (!(lambda >= 0.0 && lambda < 1.0))
            throw domain_error("cutpoint must lie in [0, 1)");
    }
    double value() const noexcept { return lambda_; }

private:
    double lambda_;
};

using Model = std::variant<Nqfa, Kwqfa, Qfc, Gpfa, Pfa>;

inline std::string kind_name(const Model& m)
{
    static constexpr const char* names[] = {"nqfa", "kwqfa", "qfc", "gpfa", "pfa"};
    return names[m.index()];
}

inline const Alphabet& alphabet_of(const Model& m)
{
    return std::visit([](const auto& x) -> const Alphabet& { return x.alphabet(); }, m);
}

} // namespace qfa
