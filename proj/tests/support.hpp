#pragma once

#include <doctest.h>

#include "fcmp/error.hpp"

namespace fcmp::testing {

template <class F>
ErrorKind kind_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an fcmp::Error");
  return ErrorKind::Io;
}

template <class F>
std::string message_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an fcmp::Error");
  return {};
}

}  // namespace fcmp::testing
