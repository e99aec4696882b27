#pragma once

#include "mmsim/common/error.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#define EXPECT_ERRC(stmt, errc)                                                          \
    do {                                                                                 \
        try {                                                                            \
            stmt;                                                                        \
            ADD_FAILURE() << "expected " << mmsim::errc_name(errc) << ", nothing thrown"; \
        } catch (const mmsim::Error& e_) {                                               \
            EXPECT_EQ(mmsim::errc_name(e_.code()), mmsim::errc_name(errc)) << e_.what(); \
        }                                                                                \
    } while (0)

