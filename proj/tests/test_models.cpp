#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"

using namespace qfa;
using namespace qfa::testing;

namespace {

bool mentions(const std::vector<Violation>& vs, const std::string& path, const std::string& text)
{
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
        return v.path == path && v.message.find(text) != std::string::npos;
    });
}

std::vector<Violation> violations_of(auto&& build)
{
    try {
        build();
    } catch (const validation_error& e) {
        return e.violations();
    }
    return {};
}

NqfaDescription two_state_identity()
{
    NqfaDescription d;
    d.alphabet = {"a"};
    d.states = {"q0", "q1"};
    d.initial = "q0";
    d.partition = {{"q0"}, {"q1"}, {}};
    for (const char* s : {"a", "$"}) {
        d.unitaries[s] = ComplexMatrix::Identity(2, 2);
        d.measurements[s] = {ComplexMatrix::Identity(2, 2)};
    }
    d.unitaries[std::string(left_marker)] = ComplexMatrix::Identity(2, 2);
    d.measurements[std::string(left_marker)] = {ComplexMatrix::Identity(2, 2)};
    return d;
}

} // namespace

TEST(Models, BuildNqfa)
{
    const auto m = build_nqfa(two_state_identity());
    EXPECT_EQ(m.size(), 2u);
    EXPECT_EQ(m.halting()[1], Halting::accepting);
    EXPECT_TRUE(check(m.description()).empty());

    auto bad = two_state_identity();
    bad.unitaries["a"](1, 1) = 2.0;
    auto vs = violations_of([&] { build_nqfa(bad); });
    EXPECT_TRUE(mentions(vs, "unitaries.a", "U_a not unitary"));

    bad = two_state_identity();
    bad.measurements["a"] = {basis_projector(0, 2)};
    vs = violations_of([&] { build_nqfa(bad); });
    EXPECT_TRUE(mentions(vs, "measurements.a", "M_a projectors do not sum to identity"));
}

TEST(Models, ConstructorsCollectEveryViolation)
{
    auto bad = two_state_identity();
    bad.unitaries["a"](1, 1) = 2.0;
    bad.measurements["$"] = {basis_projector(0, 2)};
    bad.unitaries.erase(std::string(left_marker));
    bad.unitaries["z"] = ComplexMatrix::Identity(2, 2);
    bad.partition.rejecting = {"q1"};
    const auto vs = check(bad);
    EXPECT_TRUE(mentions(vs, "unitaries.a", "not unitary"));
    EXPECT_TRUE(mentions(vs, "measurements.$", "do not sum to identity"));
    EXPECT_TRUE(mentions(vs, "unitaries." + std::string(left_marker), "missing entry"));
    EXPECT_TRUE(mentions(vs, "unitaries.z", "unknown symbol"));
    EXPECT_TRUE(mentions(vs, "partition", "more than one"));
    EXPECT_GE(vs.size(), 5u);
}

TEST(Models, BuildKwqfa)
{
    EXPECT_NO_THROW(rotation());

    auto empty = rotation_description(0.3);
    empty.states.clear();
    EXPECT_FALSE(violations_of([&] { build_kwqfa(empty); }).empty());

    auto halting_start = rotation_description(0.3);
    halting_start.partition = {{"q1"}, {"qacc", "q0"}, {"qrej"}};
    EXPECT_TRUE(mentions(violations_of([&] { build_kwqfa(halting_start); }), "initial",
                         "initial state must be non-halting"));
}

TEST(Models, KwqfaMatchesIdentityMeasurementNqfa)
{
    const auto d = rotation_description(0.7);
    EXPECT_EQ(build_kwqfa(d).nqfa(), build_nqfa(with_identity_measurements(d)));
    const auto kw = identity_machine();
    EXPECT_EQ(kw.nqfa(), build_nqfa(with_identity_measurements(identity_description())));
}

TEST(Models, BuildQfc)
{
    EXPECT_NO_THROW(trivial_qfc());

    auto mismatch = trivial_qfc_description(true);
    mismatch.observable = {{"a", basis_projector(0, 1)}, {"r", ComplexMatrix::Zero(1, 1)}};
    mismatch.control.alphabet = {"a", "r", "g"};
    for (const char* c : {"a", "r", "g"})
        mismatch.control.transitions["d0"][c] = "d0";
    EXPECT_TRUE(mentions(violations_of([&] { build_qfc(mismatch); }), "control.alphabet", "does not match"));

    auto partial = trivial_qfc_description(true);
    partial.control.states = {"d0", "d1"};
    EXPECT_TRUE(mentions(violations_of([&] { build_qfc(partial); }), "control.transitions.d1.c",
                         "missing transition for (d1, c)"));

    EXPECT_NO_THROW(kwqfa_to_qfc(rotation()));
}

TEST(Models, BuildGpfaAndPfa)
{
    GpfaDescription g;
    g.alphabet = {"a"};
    g.initial = RealVector::Ones(1);
    g.transitions["a"] = RealMatrix::Constant(1, 1, 0.5);
    g.final = RealVector::Ones(1);
    const auto gpfa = build_gpfa(g);
    EXPECT_EQ(gpfa.size(), 1u);

    auto short_rows = binary_expansion_description();
    short_rows.transitions["1"](0, 0) = 0.4;
    const auto vs = violations_of([&] { build_pfa(short_rows); });
    EXPECT_TRUE(mentions(vs, "transitions.1[0]", "row 0 of A_1 sums to"));

    EXPECT_NO_THROW(binary_expansion());

    auto bad_final = binary_expansion_description();
    bad_final.final(0) = 0.5;
    EXPECT_TRUE(mentions(violations_of([&] { build_pfa(bad_final); }), "final", "0/1"));

    auto bad_shape = g;
    bad_shape.transitions["a"] = RealMatrix::Zero(2, 2);
    EXPECT_TRUE(mentions(check(bad_shape), "transitions.a", "must be 1x1"));
}

TEST(Models, AlphabetRules)
{
    EXPECT_FALSE(Alphabet({"a", "$"}).problems().empty());
    EXPECT_FALSE(Alphabet({"a", "a"}).problems().empty());
    EXPECT_FALSE(Alphabet(std::vector<std::string>{}).problems().empty());
    EXPECT_FALSE(Alphabet({"a,b"}).problems().empty());
    EXPECT_TRUE(Alphabet({"a", "b"}).problems().empty());
    EXPECT_THROW(Alphabet({"a"}).encode({"b"}), input_error);
    EXPECT_THROW(Alphabet({"a"}).encode({"$"}), input_error);
}

TEST(Models, CutpointRange)
{
    EXPECT_NO_THROW(Cutpoint(0.0));
    EXPECT_THROW(Cutpoint(1.0), domain_error);
    EXPECT_THROW(Cutpoint(-0.1), domain_error);
}

TEST(Models, ValidationIsIdempotent)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomSpec spec{.seed = seed, .states = 2 + seed % 4, .alphabet_size = 1 + seed % 3};
        EXPECT_TRUE(check(random_nqfa(spec).description()).empty());
        EXPECT_TRUE(check(random_kwqfa(spec).description()).empty());
        EXPECT_TRUE(check(random_qfc(spec).description()).empty());
        EXPECT_TRUE(check(random_gpfa(spec).description()).empty());
        EXPECT_TRUE(check_pfa(random_pfa(spec).description()).empty());
    }
}
