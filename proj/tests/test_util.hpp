#pragma once

#include <doctest.h>
#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "iecoregen/model.hpp"
#include "iecoregen/model_text.hpp"

#ifndef IECOREGEN_SOURCE_DIR
#define IECOREGEN_SOURCE_DIR "."
#endif

namespace testutil {

inline std::filesystem::path source_dir() {
  return std::filesystem::path(IECOREGEN_SOURCE_DIR);
}

inline std::filesystem::path bench_dir() { return source_dir() / "bench"; }

/// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("iecoregen_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "cannot read ", p.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& p,
                       const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  REQUIRE_MESSAGE(bool(out), "cannot write ", p.string());
  out << text;
}

inline iecoregen::ModelPackage parse_model_ok(const std::string& text) {
  auto result = iecoregen::parse_model(text);
  if (!result.ok()) {
    for (const auto& e : result.errors) MESSAGE(e.to_string());
  }
  REQUIRE(result.ok());
  return *result.package;
}

inline const char* kEmployeeModel = R"(package hr {
  class Employee {
    attr name: String;
    attr hireDate: Date;
    attr active: Bool;
    op computeLongServiceBonus(currentDate: Date): Float;
  }
}
)";

inline const char* kAirlineModel = R"(package air {
  enum FlightStatus { SCHEDULED, PUBLISHED, CANCELLED }
  class Airline {
    attr name: String;
    ref flights: many Flight containment opposite airline;
    op publishFlight(f: Flight, now: Date): Bool;
    op countPublished(): Int;
  }
  class Flight {
    attr number: String;
    attr departureDate: Date;
    attr status: FlightStatus = SCHEDULED;
    ref airline: Airline opposite flights;
  }
}
)";

}  // namespace testutil
