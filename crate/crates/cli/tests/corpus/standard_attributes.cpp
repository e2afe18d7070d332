[[nodiscard]] int compute(int a, [[maybe_unused]] int b) { return a; }

[[deprecated("use compute")]] int old_compute(int a) { return a; }

struct [[gnu::packed]] Header {
  unsigned char tag;
  unsigned int length;
};

int sum(int n) {
  int total = 0;
  for (int i = 0; i < n; i++) {
    [[likely]] total += i;
  }
  return total;
}

[[noreturn]] void die();
