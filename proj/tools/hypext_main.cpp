#include <cstdio>

int main() {
  std::puts("hypext: CLI under construction");
  return 0;
}
