#pragma once

#include "secrecy/core.hpp"
#include "secrecy/linalg.hpp"
#include "secrecy/quantum.hpp"
#include "secrecy/sdp.hpp"
#include "secrecy/sdp_model.hpp"
#include "secrecy/entropy.hpp"
#include "secrecy/lemmas.hpp"
#include "secrecy/channel.hpp"
#include "secrecy/capacity.hpp"
#include "secrecy/codes.hpp"
#include "secrecy/converse.hpp"
#include "secrecy/io.hpp"
