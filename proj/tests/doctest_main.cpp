#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstring>
#include <string>

// Binary path handed over by CTest for tests that spawn the CLI.
std::string g_nepdf_bin;

int main(int argc, char** argv) {
  constexpr const char* kBinFlag = "--nepdf-bin=";
  std::vector<char*> args;
  for (int i = 0; i < argc; ++i) {
    if (std::strncmp(argv[i], kBinFlag, std::strlen(kBinFlag)) == 0)
      g_nepdf_bin = argv[i] + std::strlen(kBinFlag);
    else
      args.push_back(argv[i]);
  }
  doctest::Context context(static_cast<int>(args.size()), args.data());
  return context.run();
}
