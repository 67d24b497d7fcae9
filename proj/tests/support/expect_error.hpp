#pragma once

#include <gtest/gtest.h>

#include "securecam/error.hpp"

namespace securecam::testing {

template <typename Fn>
void expect_error(ErrorCode code, const Fn& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace securecam::testing
