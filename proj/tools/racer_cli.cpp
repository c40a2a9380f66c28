// Placeholder CLI; grows subcommands as the harness lands.
#include <cstdio>

int main() {
  std::puts("racer: no subcommands wired yet");
  return 0;
}
