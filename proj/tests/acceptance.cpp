// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

// Runs the acceptance criteria through the public C API and prints one line
// per criterion. Exit status is the number of failed criteria (capped at 1).

#include <cstdio>
#include <cstdlib>

#include "cafeen/cafeen.h"

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  const cafeen_status st = cafeen_verify(
      only,
      [](int, int, const char* line, void*) {
        std::printf("%s\n", line);
        std::fflush(stdout);
      },
      nullptr, &failed);
  if (st != CAFEEN_OK) {
    std::fprintf(stderr, "acceptance: %s\n", cafeen_last_error());
    return 2;
  }
  return failed > 0 ? 1 : 0;
}
