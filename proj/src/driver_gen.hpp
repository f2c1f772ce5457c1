#pragma once

// Per-language test-driver source generation, split out of sandbox.cpp so the
// golden-file tests can target it through prepare_test_script.

#include <map>
#include <string>

#include "reasontrans/corpus.hpp"

namespace reasontrans::driver_gen {

/// driver.py is static; all per-suite variation lives in cases.json.
std::string python_driver();
std::string python_cases_json(const TestSuite& suite);

/// Java filename rule: public class name wins, then the first declared class;
/// code without any class/interface/enum declaration is wrapped in
/// `public class Candidate { ... }`.
struct JavaCandidate {
    std::string filename;
    std::string content;
};
JavaCandidate java_candidate_file(const std::string& code);
std::string java_driver(const TestSuite& suite);

/// The C++ driver is one translation unit: prelude, helpers, candidate code,
/// generated case functions, dispatch main.
std::string cpp_driver(const std::string& candidate_code, const TestSuite& suite);

}  // namespace reasontrans::driver_gen
