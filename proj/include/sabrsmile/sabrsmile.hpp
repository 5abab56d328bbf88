// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sabrsmile/geometry.hpp"
#include "sabrsmile/kernel.hpp"
#include "sabrsmile/pricers.hpp"
#include "sabrsmile/expansion.hpp"
#include "sabrsmile/fdm.hpp"
