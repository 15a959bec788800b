#pragma once

#define SKIGP_VERSION_STRING "0.1.0"
