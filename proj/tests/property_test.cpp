#include "properties.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qspectra;
using namespace qspectra::test;

class BundledProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(BundledProperties, Hold)
{
    Substitution s = bundled(GetParam());
    for (const auto& check : per_substitution_checks()) {
        auto failures = check.run(s);
        EXPECT_TRUE(failures.empty()) << check.name << ": " << failures.size() << " violations, first: "
                                      << (failures.empty() ? "" : failures.front());
    }
}

INSTANTIATE_TEST_SUITE_P(Specs, BundledProperties, ::testing::ValuesIn(kBundled),
                         [](const auto& info) {
                             std::string n = info.param;
                             std::replace(n.begin(), n.end(), '-', '_');
                             return n;
                         });

TEST(Properties, ConfigurationInvariance)
{
    auto failures = check_configuration_invariance(11, 12);
    EXPECT_TRUE(failures.empty()) << failures.front();
}
