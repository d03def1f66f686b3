#include <iostream>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::cerr << "wss: no commands wired up yet\n";
  return 1;
}
