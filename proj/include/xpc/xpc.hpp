#pragma once

#include "xpc/bits.hpp"
#include "xpc/code_lengths.hpp"
#include "xpc/codec.hpp"
#include "xpc/codespec.hpp"
#include "xpc/errors.hpp"
#include "xpc/exp_huffman.hpp"
#include "xpc/golomb.hpp"
#include "xpc/json_io.hpp"
#include "xpc/light_tail.hpp"
#include "xpc/minimax.hpp"
#include "xpc/model.hpp"
#include "xpc/numeric.hpp"
#include "xpc/oracle.hpp"
#include "xpc/penalty.hpp"
