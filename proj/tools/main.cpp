#include <cstdio>

int main() {
  std::puts("choicones: placeholder");
  return 0;
}
