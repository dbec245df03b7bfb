namespace tame {}
