/*
 * Copyright 2026 The condatom Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "condatom/atomless.hpp"
#include "condatom/commands.hpp"
#include "condatom/conditional.hpp"
#include "condatom/errors.hpp"
#include "condatom/event_set.hpp"
#include "condatom/fibered_space.hpp"
#include "condatom/generator.hpp"
#include "condatom/kernel.hpp"
#include "condatom/multi_measure.hpp"
#include "condatom/piecewise_linear.hpp"
#include "condatom/properties.hpp"
#include "condatom/scalar.hpp"
#include "condatom/scenario.hpp"
#include "condatom/uniform.hpp"
