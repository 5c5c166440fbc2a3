namespace cellring {}
