namespace clang {
template <typename T> struct syntax {};
}

struct taco {};
struct quantum {};

clang::syntax<taco> a;
clang::syntax<quantum> b;

int __qpu__value = 3;
int qpu = __qpu__value;
void not_an_attribute() { int arr[2] = {1, 2}; (void)arr[arr[0]]; }
