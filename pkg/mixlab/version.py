MIXLAB_VERSIONING = "0.3"
