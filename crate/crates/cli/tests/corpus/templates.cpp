#include <map>
#include <vector>
#include <complex>

template <typename T, int N = 3>
struct Fixed {
  T data[N]{};
  constexpr int size() const { return N; }
};

template <typename K, typename V>
using Table = std::map<K, std::vector<std::pair<K, V>>>;

std::vector<std::vector<std::complex<double>>> grid(int n) {
  return std::vector<std::vector<std::complex<double>>>(n, std::vector<std::complex<double>>(n));
}

template <class... Ts> void ignore(Ts &&...) {}
