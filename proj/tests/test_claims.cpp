#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morphnet/claims.hpp"

using namespace morphnet;

namespace {

// pair reduction with the two case formulas exchanged
TropicalAffineForm swapped_case_reduce(double a1, double b1, double a2, double b2) {
    if (b2 > b1 || (b1 == b2 && a2 > a1)) {
        std::swap(a1, a2);
        std::swap(b1, b2);
    }
    const double c = a2 - a1;
    if (c <= 0.0) return {a1 + std::max(b1, b2 + c), a1 + c};
    return {a1 + b1, a1};
}

// product that forgets to combine the operand signs
SignedLogValue sign_dropping_mul(const SignedLogValue& a, const SignedLogValue& b) {
    if (a.is_zero || b.is_zero) return SignedLogValue::zero();
    return SignedLogValue::make(1, a.log_mag + b.log_mag);
}

}  // namespace

TEST_CASE("claim coverage matches the registered id set") {
    const std::vector<ClaimCheck> checks = run_all(7, ClaimScale::Smoke);
    REQUIRE(checks.size() == claim_ids().size());
    for (std::size_t i = 0; i < checks.size(); ++i) {
        CHECK(checks[i].id == claim_ids()[i]);
        CHECK(checks[i].anchor == claim_anchor(checks[i].id));
        CHECK(!checks[i].evidence.empty());
    }
    CHECK_THROWS_AS(claim_anchor("thm9"), ValidationError);
}

TEST_CASE("claims are deterministic per seed and scale") {
    const auto a = claims_report_json(run_all(7, ClaimScale::Smoke), 7, ClaimScale::Smoke);
    const auto b = claims_report_json(run_all(7, ClaimScale::Smoke), 7, ClaimScale::Smoke);
    CHECK(a.dump() == b.dump());
}

TEST_CASE("individual claims at smoke scale") {
    CHECK(check_lemma2(7, ClaimScale::Smoke).pass);
    CHECK(check_lemma3(7, ClaimScale::Smoke).pass);
    CHECK(check_thm1(7, ClaimScale::Smoke).pass);
    CHECK(check_thm3(7, ClaimScale::Smoke).pass);
    CHECK(check_eq6_lns(7, ClaimScale::Smoke).pass);

    // the slope clause of thm2 holds even though the membership clause
    // cannot: three-slope forms miss the non-convex signed networks
    const ClaimCheck thm2 = check_thm2(7, ClaimScale::Smoke);
    CHECK(thm2.evidence["slope_clause_pass"].get<bool>());
    CHECK(thm2.evidence["sign_safe_max_deviation"].get<double>() <= 1e-9);
    CHECK(!thm2.evidence["membership_clause_pass"].get<bool>());
    CHECK(!thm2.pass);
}

TEST_CASE("tampered reduction formulas trip the lemma2 check") {
    const ClaimCheck broken = check_lemma2(7, ClaimScale::Smoke, &swapped_case_reduce);
    CHECK(!broken.pass);
    CHECK(broken.evidence["max_deviation"].get<double>() > 1e-6);
}

TEST_CASE("a sign-dropping product trips the lns equivalence check") {
    const ClaimCheck broken = check_eq6_lns(7, ClaimScale::Smoke, &sign_dropping_mul);
    CHECK(!broken.pass);
    CHECK(broken.evidence["max_mac_relative_error"].get<double>() > 1e-3);
}

TEST_CASE("scales differ only in sample counts") {
    const ClaimConfig smoke = claim_config(ClaimScale::Smoke);
    const ClaimConfig full = claim_config(ClaimScale::Full);
    CHECK(smoke.nets == 50);
    CHECK(full.nets == 500);
    CHECK(smoke.lemma2_tuples < full.lemma2_tuples);
    CHECK(scale_from_string("smoke") == ClaimScale::Smoke);
    CHECK(scale_from_string("full") == ClaimScale::Full);
    CHECK_THROWS_AS(scale_from_string("medium"), ValidationError);
}
