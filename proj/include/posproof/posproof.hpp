#pragma once

#include "posproof/error.hpp"
#include "posproof/syntax.hpp"
#include "posproof/ljplus.hpp"
#include "posproof/session.hpp"
#include "posproof/ljb.hpp"
#include "posproof/grammar.hpp"
#include "posproof/expand.hpp"
#include "posproof/sysf.hpp"
