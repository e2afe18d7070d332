// Grüße aus dem Quellcode: λ → μ, 量子
#include <string>

std::string greeting = "héllo wörld { }";
std::u32string wide = U"数据 { [[ ]] }";
const char *emoji = "\xF0\x9F\x98\x80";
int café = 1;
