package main

// The message is never read, but the buffer lets the sender finish.
func main() {
	ch := make(chan int, 1)
	go func() {
		ch <- 42
	}()
}
