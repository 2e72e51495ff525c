#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "alphahash/util.hpp"

// Tests exercise spine-shaped expressions whose recursion depth tracks their
// size, so the whole run gets a large stack.
int main(int argc, char** argv) {
  doctest::Context ctx(argc, argv);
  int rc = 1;
  alphahash::call_with_stack(alphahash::kBigStack, [&] { rc = ctx.run(); });
  return rc;
}
