#include <gtest/gtest.h>

#include "gasfl/oracles/suites.hpp"

namespace gasfl::oracles {
namespace {

class OracleSuite : public ::testing::TestWithParam<std::string> {};

TEST_P(OracleSuite, AgreesWithReference) {
    const auto report = run_suite(GetParam(), 20240601, 1000);
    EXPECT_TRUE(report.passed) << report.failure << " seed " << report.failing_seed;
    EXPECT_EQ(report.instances, 1000u);
    EXPECT_LE(report.max_discrepancy, report.tolerance);
}

TEST_P(OracleSuite, InjectedFaultIsCaught) {
    const auto report = run_suite(GetParam(), 20240601, 200, true);
    EXPECT_FALSE(report.passed);
}

INSTANTIATE_TEST_SUITE_P(All, OracleSuite, ::testing::ValuesIn(suite_names()),
                         [](const auto& info) { return info.param; });

TEST(OracleSuites, UnknownSuiteThrows) { EXPECT_THROW(run_suite("tarot", 0), std::invalid_argument); }

}  // namespace
}  // namespace gasfl::oracles
