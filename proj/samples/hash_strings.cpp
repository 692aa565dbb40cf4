// Hash a few strings under a freshly generated 64-bit key schedule, once in
// one call and once streamed in pieces.

#include <cstdio>
#include <cstdlib>
#include <string_view>

#include <pmplus/pmplus.hpp>

int main(int argc, char** argv) {
  const auto ks = argc > 1 ? pmplus::generate_schedule<pmplus::pm64>(std::strtoull(argv[1], nullptr, 0))
                           : pmplus::generate_schedule_from_entropy<pmplus::pm64>();

  for (std::string_view s : {"", "a", "hello, world"}) {
    const auto d = pmplus::hash_oneshot<pmplus::pm64>(ks, std::as_bytes(std::span(s.data(), s.size())));
    std::printf("%s  \"%.*s\"\n", pmplus::to_hex(d).c_str(), static_cast<int>(s.size()), s.data());
  }

  pmplus::tree_hasher<pmplus::pm64> h(ks);
  h.update("hello, ");
  h.update("world");
  std::printf("%s  streamed\n", pmplus::to_hex(h.finalize()).c_str());
}
