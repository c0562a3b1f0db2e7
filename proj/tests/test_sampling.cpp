// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "sbr/cli.hpp"

TEST_CASE("placeholder test_sampling") { CHECK(true); }
