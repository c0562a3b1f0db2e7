// SPDX-License-Identifier: Apache-2.0
#include "sbr/cli.hpp"
int main() { return 0; }
