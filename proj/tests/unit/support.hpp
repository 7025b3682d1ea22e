#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wxbits/error.hpp"

namespace wxbits::testing {

inline std::string data_path(const std::string& name) {
  return std::string(WXBITS_TEST_DATA) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Uniform random composition of 100 into `arity` non-negative parts.
inline std::vector<int> random_composition(std::mt19937_64& rng, std::size_t arity) {
  std::uniform_int_distribution<int> cut(0, 100);
  std::vector<int> cuts(arity - 1);
  for (auto& c : cuts) c = cut(rng);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> out;
  int prev = 0;
  for (int c : cuts) {
    out.push_back(c - prev);
    prev = c;
  }
  out.push_back(100 - prev);
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("wxbits-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace wxbits::testing

// Asserts that `stmt` throws wxbits::Error with the given code.
#define EXPECT_WX_ERROR(stmt, expected_code)                                  \
  do {                                                                        \
    try {                                                                     \
      stmt;                                                                   \
      ADD_FAILURE() << "expected " << ::wxbits::to_string(expected_code);     \
    } catch (const ::wxbits::Error& wx_error_) {                              \
      EXPECT_EQ(wx_error_.code(), expected_code) << wx_error_.what();         \
    }                                                                         \
  } while (0)
