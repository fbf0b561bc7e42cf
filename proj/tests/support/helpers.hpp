#pragma once

#include "saext/error.hpp"

namespace testing_support {

/// Error code thrown by fn, or Errc::internal when nothing was thrown.
template <class Fn>
saext::Errc error_code(Fn&& fn) {
    try {
        fn();
    } catch (const saext::Error& e) {
        return e.code();
    }
    return saext::Errc::internal;
}

}  // namespace testing_support
