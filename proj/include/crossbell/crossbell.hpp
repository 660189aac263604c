#pragma once

#include "crossbell/error.hpp"
#include "crossbell/statevec.hpp"
#include "crossbell/bell.hpp"
#include "crossbell/measure.hpp"
#include "crossbell/channel.hpp"
#include "crossbell/oracle.hpp"
#include "crossbell/teleport.hpp"
#include "crossbell/message.hpp"
#include "crossbell/session.hpp"
#include "crossbell/serialize.hpp"
#include "crossbell/divergence.hpp"
#include "crossbell/version.hpp"
